// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "conex/report.hpp"
#include "membership_oracle.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <random>

using namespace conex;

namespace {

// Pinned tolerances.
constexpr int identity_forms = 200;
constexpr int identity_degree = 6;
constexpr double nash_tol = 1e-8;
constexpr int nash_random_directions = 100;
constexpr int nash_rays = 36;
constexpr int bump_samples = 10000;
constexpr int partition_samples = 1000;
constexpr double partition_tol = 1e-12;
constexpr double metric_tol = 1e-6;
constexpr std::size_t metric_rays = 10000;

struct Outcome
{
    bool ok = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (ok)
            detail = why;
        ok = false;
    }
};

using Criterion = std::function<Outcome()>;

Outcome identity_suite()
{
    Outcome o;
    for (const std::string chart : {"r2", "r4"})
    {
        RunConfig c;
        c.command = "verify";
        c.chart = chart;
        c.count = identity_forms;
        c.degree = identity_degree;
        c.seed = 20240;
        const auto r = run(c);
        for (const auto& check : r.checks)
        {
            if (!check.passed)
                o.fail(chart + " " + check.name + ": " + check.witness);
        }
    }
    o.detail = o.ok ? std::to_string(identity_forms) + " forms per identity on r2 and r4" : o.detail;
    return o;
}

Outcome conical_suite()
{
    Outcome o;
    const auto c = detail::circle_chart();
    auto cosm = [&](int b) { return CoefficientElement::cos_mode(c, 0, b); };
    auto sinm = [&](int b) { return CoefficientElement::sin_mode(c, 0, b); };
    const std::vector<Link> links{flat_circle(),
                                  quadric_link(1),
                                  perturbed_circle(cosm(2) * ratio(1, 4)),
                                  perturbed_circle(cosm(1) * ratio(1, 3) + sinm(3) * ratio(1, 5)),
                                  perturbed_circle(sinm(2) * ratio(1, 2)),
                                  construct_flatness_link(3)};
    for (const auto& link : links)
    {
        const ConeSpace cone(link);
        const auto f = make_cone_symplectic(cone, *link.contact_form());
        const auto r = liouville_identities(f);
        if (!r.all())
            o.fail(link.name() + ": " + f.total.str());
    }
    // The quadric cone form is the restriction of the ambient one.
    const ConeSpace q(quadric_link(1));
    const auto pulled = pullback(q.embedding(), make_symplectic_chart(2).omega);
    if (!(make_cone_symplectic(q, *q.link().contact_form()).total == pulled))
        o.fail("quadric cone form differs from the restricted ambient form");
    if (o.ok)
        o.detail = std::to_string(links.size()) + " links, exact";
    return o;
}

Outcome duality()
{
    Outcome o;
    struct Case
    {
        std::string chart;
        int D;
        std::size_t k;
    };
    std::vector<Case> cases;
    for (const std::string chart : {"r2", "r4"})
    {
        for (int D : {4, 8})
        {
            for (std::size_t k : {1, 2, 3, 4})
                cases.push_back({chart, D, k});
        }
    }
    for (const auto& cs : cases)
    {
        const auto s = chart_from_selector(cs.chart);
        std::optional<GroupAction> g;
        if (cs.k > 1)
            g = planar_rotation_action(s, cs.k);
        const GroupAction* gp = g ? &*g : nullptr;
        const auto delta = homology_ranks(build_stratified_complex(s, cs.D, ComplexOperator::delta, gp));
        const auto de_rham = homology_ranks(build_stratified_complex(s, cs.D, ComplexOperator::de_rham, gp));
        std::vector<std::size_t> top(s.dimension() + 1, 0), bottom(s.dimension() + 1, 0);
        top.back() = 1;
        bottom.front() = 1;
        const std::vector<std::size_t> reversed(de_rham.rbegin(), de_rham.rend());
        const std::string tag = cs.chart + " D=" + std::to_string(cs.D) + " k=" + std::to_string(cs.k);
        if (delta != top)
            o.fail(tag + ": delta ranks off");
        if (de_rham != bottom)
            o.fail(tag + ": de Rham ranks off");
        if (delta != reversed)
            o.fail(tag + ": duality broken");
    }
    if (o.ok)
        o.detail = std::to_string(cases.size()) + " complexes";
    return o;
}

Outcome membership_agreement()
{
    Outcome o;
    auto t = ConeFunction::parse({"1:0:1"});
    if (!membership(t, ratio(1, 2)) || membership(t, 0))
        o.fail("t misclassified");
    std::size_t agreed = 0;
    for (const Rational theta : {Rational(0), ratio(1, 2)})
    {
        const oracle::GeneratorSpan span(sgn(theta) != 0, 8, 10);
        for (int a = 0; a <= 8; ++a)
        {
            for (int b = 0; b <= 10; ++b)
            {
                for (int part = 0; part < (b == 0 ? 1 : 2); ++part)
                {
                    ConeFunction f;
                    const GaussianRational c = part == 0 ? GaussianRational(ratio(1, 2))
                                                         : GaussianRational(Rational(0), ratio(-1, 2));
                    f.add_term(a, b, b == 0 ? GaussianRational(1) : c);
                    if (b != 0)
                        f.add_term(a, -b, c.conj());
                    std::map<int, GaussianRational> modes;
                    for (const auto& [k, v] : f.terms())
                        modes[k.second] = v;
                    if (membership(f, theta) == span.contains(a, modes))
                        ++agreed;
                    else
                        o.fail("theta=" + theta.get_str() + " a=" + std::to_string(a) + " b=" + std::to_string(b));
                }
            }
        }
    }
    if (o.ok)
        o.detail = std::to_string(agreed) + " bidegree queries agree";
    return o;
}

Outcome flatness()
{
    Outcome o;
    const auto cos2 = CoefficientElement::cos_mode(detail::circle_chart(), 0, 2) * ratio(1, 4);
    const std::vector<std::pair<Link, std::size_t>> expected{
        {latitude_circle(ratio(1, 2)), 0}, {latitude_circle(0), 1}, {perturbed_circle(cos2), 4}};
    for (const auto& [link, want] : expected)
    {
        const auto got = degree_of_flatness(tangent_cone(ConeSpace(link)));
        if (got != want)
            o.fail(link.name() + ": " + std::to_string(got) + " != " + std::to_string(want));
    }
    for (int k = 0; k <= 3; ++k)
    {
        const auto tc = tangent_cone(ConeSpace(construct_flatness_link(k)));
        if (degree_of_flatness(tc) != static_cast<std::size_t>(2 * k) || tc.flat_pairs.size() != static_cast<std::size_t>(k))
            o.fail("construct_flatness_link(" + std::to_string(k) + ")");
    }
    if (o.ok)
        o.detail = "0/1/4 and k = 0..3";
    return o;
}

Outcome nash()
{
    Outcome o;
    const ConeSpace cone(latitude_circle(ratio(1, 2)));
    // Analytic cone over the complement of the open disk: sqrt(3)|v3| <= |v_xy|.
    auto analytic = [](const std::array<double, 3>& v) { return std::sqrt(3.0) * std::abs(v[2]) <= std::hypot(v[0], v[1]); };
    std::vector<std::array<double, 3>> dirs{{0, 0, 1}, {0, 0, -1}};
    for (int k = 0; k < nash_rays; ++k)
    {
        const double phi = 2 * std::numbers::pi * k / nash_rays;
        dirs.push_back({std::sqrt(3.0) / 2 * std::cos(phi), std::sqrt(3.0) / 2 * std::sin(phi), 0.5});
    }
    std::mt19937_64 rng(77);
    std::normal_distribution<double> n(0, 1);
    for (int k = 0; k < nash_random_directions; ++k)
        dirs.push_back({n(rng), n(rng), n(rng)});
    std::size_t checked = 0;
    for (std::size_t i = 0; i < dirs.size(); ++i)
    {
        const auto& v = dirs[i];
        const bool want = i >= 2 && i < 2 + nash_rays ? true : analytic(v);
        const auto m = nash_cone_membership(cone, v, nash_tol);
        if (m.member != want)
        {
            o.fail("direction " + std::to_string(i) + " min distance " + std::to_string(m.min_distance));
        }
        ++checked;
    }
    if (o.ok)
        o.detail = std::to_string(checked) + " directions, tol 1e-8";
    return o;
}

Outcome bump_partition()
{
    Outcome o;
    for (double eps : {1.0, 0.25})
    {
        RunConfig c;
        c.command = "bump-check";
        c.epsilon = eps;
        c.bump_samples = bump_samples;
        c.partition_samples = partition_samples;
        c.partition_tol = partition_tol;
        const auto r = run(c);
        for (const auto& check : r.checks)
        {
            if (!check.passed)
                o.fail(check.name + ": " + check.witness);
        }
    }
    // A finer cover with many annuli.
    std::vector<RadialPatch> cover{{0, 0.15, true}};
    for (int k = 1; k < 10; ++k)
        cover.push_back({0.1 * k - 0.02, 0.1 * k + 0.12, false});
    const auto pu = partition_of_unity(cover, 1.0);
    double worst = 0;
    for (int k = 0; k < partition_samples; ++k)
    {
        const double t = static_cast<double>(k) / partition_samples;
        double sum = 0;
        for (const auto& f : pu.functions)
            sum += f(t);
        worst = std::max(worst, std::abs(sum - 1));
    }
    if (worst > partition_tol)
        o.fail("ten-patch cover sum error " + std::to_string(worst));
    if (o.ok)
        o.detail = "bump 1e4 samples, partition 1e3 samples";
    return o;
}

Outcome metric()
{
    Outcome o;
    const auto c = detail::circle_chart();
    const auto c2 = CoefficientElement::cos_mode(c, 0, 2) * ratio(1, 4);
    const auto s2 = CoefficientElement::sin_mode(c, 0, 2) * ratio(1, 4);
    const MetricPerturbation conical{c2, s2, c2 * Rational(-1), 2};
    const auto good = metric_c1_check(conical, metric_rays, metric_tol);
    if (!good.passed)
        o.fail("conical perturbation deviation " + std::to_string(good.max_deviation));
    MetricPerturbation linear = conical;
    linear.radial_order = 1;
    const auto bad = metric_c1_check(linear, metric_rays, metric_tol);
    if (bad.passed)
        o.fail("negative control passed with deviation " + std::to_string(bad.max_deviation));
    if (o.ok)
    {
        std::ostringstream os;
        os << "deviation " << good.max_deviation << ", control " << bad.max_deviation;
        o.detail = os.str();
    }
    return o;
}

}   // namespace

int main()
{
    const std::vector<std::pair<std::string, Criterion>> criteria{
        {"1 algebraic identities", identity_suite}, {"2 conical identities", conical_suite},
        {"3 delta / de Rham duality", duality},     {"4 membership oracle", membership_agreement},
        {"5 flatness", flatness},                   {"6 Nash cone", nash},
        {"7 bump and partition", bump_partition},   {"8 metric C1", metric},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria)
    {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = fn();
        }
        catch (const std::exception& e)
        {
            o.fail(std::string("exception: ") + e.what());
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (o.ok ? "PASS" : "FAIL") << "  criterion " << name << "  (" << o.detail << ", " << s << " s)\n";
        failures += o.ok ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
