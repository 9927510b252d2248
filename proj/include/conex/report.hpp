/**
 * Run configurations and JSON reports for the command-line front end.
 *
 * A report is a deterministic function of its configuration: no clocks,
 * host names or addresses enter the JSON unless timing is requested.
 */

#ifndef CONEX_REPORT_HPP
#define CONEX_REPORT_HPP

#include "random_forms.hpp"
#include "smooth_structure.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace conex {

inline constexpr const char* tool_version = "0.1.0";
inline constexpr int report_schema = 1;
inline constexpr const char* output_dir_env = "CONEX_OUTPUT_DIR";

using Json = nlohmann::ordered_json;

/** Invalid configuration (exit code 2). */
class ConfigError : public std::invalid_argument
{
    public:
        using std::invalid_argument::invalid_argument;
};

struct RunConfig
{
    std::string command;
    std::string chart = "r2";
    int degree = 6;             // verify: coefficient degree
    int count = 200;            // verify: forms per check
    std::uint64_t seed = 0;
    int truncation = 8;         // homology: D
    std::string op = "delta";   // homology: delta | deRham
    std::string truncation_mode = "total";   // homology: total | coefficient
    int group = 1;              // homology: Z_k
    std::string link = "flat";  // cone-report, flatness
    std::optional<int> pairs;   // flatness: construct a link with this many flat pairs
    std::string theta = "1/2";  // membership
    std::vector<std::string> terms;   // membership
    double nash_tol = 1e-8;
    double metric_tol = 1e-6;
    int metric_rays = 10000;
    int metric_order = 2;
    double epsilon = 1.0;       // bump-check
    int bump_samples = 10000;
    int partition_samples = 1000;
    double partition_tol = 1e-12;
    std::string output;         // explicit JSON path
    bool with_timing = false;
};

struct CheckResult
{
    std::string name;
    bool passed = false;
    std::string witness;   // set on failure
    Json details = Json::object();
};

struct Report
{
    RunConfig config;
    std::vector<CheckResult> checks;
    Json result = Json::object();
    double elapsed_ms = 0.0;

    bool passed() const
    {
        for (const auto& c : checks)
        {
            if (!c.passed)
                return false;
        }
        return true;
    }

    int exit_code() const { return passed() ? 0 : 1; }

    void add(std::string name, bool ok, std::string witness = "", Json details = Json::object())
    {
        checks.push_back({std::move(name), ok, ok ? "" : std::move(witness), std::move(details)});
    }
};

inline Json config_json(const RunConfig& c)
{
    Json j;
    j["command"] = c.command;
    if (c.command == "verify")
    {
        j["chart"] = c.chart;
        j["degree"] = c.degree;
        j["count"] = c.count;
        j["seed"] = c.seed;
    }
    else if (c.command == "homology")
    {
        j["chart"] = c.chart;
        j["truncation"] = c.truncation;
        j["operator"] = c.op;
        j["truncation_mode"] = c.truncation_mode;
        j["group"] = c.group;
    }
    else if (c.command == "cone-report")
    {
        j["link"] = c.link;
        j["nash_tol"] = c.nash_tol;
        j["metric_tol"] = c.metric_tol;
        j["metric_rays"] = c.metric_rays;
        j["metric_order"] = c.metric_order;
    }
    else if (c.command == "membership")
    {
        j["theta"] = c.theta;
        j["terms"] = c.terms;
    }
    else if (c.command == "flatness")
    {
        if (c.pairs)
            j["pairs"] = *c.pairs;
        else
            j["link"] = c.link;
    }
    else if (c.command == "bump-check")
    {
        j["epsilon"] = c.epsilon;
        j["bump_samples"] = c.bump_samples;
        j["partition_samples"] = c.partition_samples;
        j["partition_tol"] = c.partition_tol;
    }
    return j;
}

inline Json to_json(const Report& r)
{
    Json j;
    j["schema"] = report_schema;
    j["tool"] = "conex";
    j["version"] = tool_version;
    j["config"] = config_json(r.config);
    Json checks = Json::array();
    for (const auto& c : r.checks)
    {
        Json cj;
        cj["name"] = c.name;
        cj["status"] = c.passed ? "pass" : "fail";
        if (!c.passed)
            cj["witness"] = c.witness;
        if (!c.details.empty())
            cj["details"] = c.details;
        checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);
    j["result"] = r.result;
    j["status"] = r.passed() ? "pass" : "fail";
    if (r.config.with_timing)
        j["timing_ms"] = r.elapsed_ms;
    return j;
}

// ---------------------------------------------------------------------------
// Selectors

inline SymplecticChart chart_from_selector(const std::string& s)
{
    if (s == "r2")
        return make_symplectic_chart(1);
    if (s == "r4")
        return make_symplectic_chart(2);
    if (s == "r6")
        return make_symplectic_chart(3);
    throw ConfigError("unknown chart '" + s + "' (expected r2, r4 or r6)");
}

inline Rational rational_from_config(const std::string& text, const std::string& what)
{
    try
    {
        return parse_rational(text);
    }
    catch (const std::exception& e)
    {
        throw ConfigError(what + ": " + e.what());
    }
}

/**
 * Link selectors: flat, quadric, latitude:<q>, hopf:<a>,<b>,
 * flat-pairs:<k>, cos2 (z = cos(2 phi) / 4).
 */
inline Link link_from_selector(const std::string& s)
{
    const auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
    try
    {
        if (kind == "flat" && arg.empty())
            return flat_circle();
        if (kind == "quadric" && arg.empty())
            return quadric_link(1);
        if (kind == "cos2" && arg.empty())
            return perturbed_circle(CoefficientElement::cos_mode(detail::circle_chart(), 0, 2) * Rational(1, 4));
        if (kind == "latitude")
            return latitude_circle(parse_rational(arg));
        if (kind == "hopf")
        {
            const auto comma = arg.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("hopf needs a,b");
            return hopf_circle(parse_rational(arg.substr(0, comma)), parse_rational(arg.substr(comma + 1)));
        }
        if (kind == "flat-pairs")
        {
            std::size_t used = 0;
            const int k = std::stoi(arg, &used);
            if (used != arg.size() || k < 0)
                throw std::invalid_argument("flat-pairs needs k >= 0");
            return construct_flatness_link(k);
        }
    }
    catch (const std::exception& e)
    {
        throw ConfigError("link '" + s + "': " + e.what());
    }
    throw ConfigError("unknown link '" + s + "'");
}

// ---------------------------------------------------------------------------
// Commands

namespace detail {

inline void run_verify(const RunConfig& c, Report& r)
{
    if (c.degree < 0 || c.count < 1)
        throw ConfigError("verify needs degree >= 0 and count >= 1");
    const auto s = chart_from_selector(c.chart);
    FormGenerator gen(s.chart, c.seed, c.degree);
    struct Tally
    {
        std::size_t ok = 0;
        std::string witness;
    };
    std::map<std::string, Tally> tally;
    const std::vector<std::string> names{"d_squared", "delta_squared", "delta_bracket_expansion", "star_involution",
                                         "delta_star_d_star"};
    auto record = [&](const std::string& name, bool ok, const DifferentialForm& a) {
        auto& t = tally[name];
        if (ok)
            ++t.ok;
        else if (t.witness.empty())
            t.witness = a.str();
    };
    for (int k = 0; k < c.count; ++k)
    {
        const DifferentialForm a = gen.form();
        record("d_squared", exterior_derivative(exterior_derivative(a)).is_zero(), a);
        record("delta_squared", brylinski_delta(brylinski_delta(a, s), s).is_zero(), a);
        record("star_involution", symplectic_star(symplectic_star(a, s), s) == a, a);
        record("delta_star_d_star", star_delta_identity_check(a, s), a);
        // Decomposable f0 df1 ^ ... ^ dfp with low-degree fi.
        std::uniform_int_distribution<int> pdist(1, static_cast<int>(s.dimension()));
        const int p = pdist(gen.engine());
        FormGenerator small(s.chart, c.seed * 1000003ULL + static_cast<std::uint64_t>(k), 2, 2);
        const CoefficientElement f0 = gen.polynomial();
        std::vector<CoefficientElement> fs;
        for (int i = 0; i < p; ++i)
            fs.push_back(small.polynomial());
        const DifferentialForm dec = decomposable_form(f0, fs);
        record("delta_bracket_expansion", brylinski_delta(dec, s) == brylinski_delta_expanded(f0, fs, s), dec);
    }
    for (const auto& name : names)
    {
        const auto& t = tally[name];
        Json d;
        d["forms"] = c.count;
        d["exact_matches"] = t.ok;
        r.add(name, t.ok == static_cast<std::size_t>(c.count), t.witness, d);
    }
    r.result["chart"] = c.chart;
    r.result["dimension"] = s.dimension();
}

inline ComplexOperator operator_from(const std::string& op)
{
    if (op == "delta")
        return ComplexOperator::delta;
    if (op == "deRham" || op == "derham" || op == "d")
        return ComplexOperator::de_rham;
    throw ConfigError("unknown operator '" + op + "' (expected delta or deRham)");
}

inline Truncation truncation_from(const std::string& t)
{
    if (t == "total")
        return Truncation::total_degree;
    if (t == "coefficient")
        return Truncation::coefficient_degree;
    throw ConfigError("unknown truncation mode '" + t + "' (expected total or coefficient)");
}

inline Json ranks_json(const std::vector<std::size_t>& v)
{
    Json j = Json::array();
    for (auto x : v)
        j.push_back(x);
    return j;
}

inline void run_homology(const RunConfig& c, Report& r)
{
    if (c.truncation < 0)
        throw ConfigError("truncation D must be >= 0");
    if (c.group < 1)
        throw ConfigError("group order k must be >= 1");
    const auto s = chart_from_selector(c.chart);
    const auto op = operator_from(c.op);
    const auto tr = truncation_from(c.truncation_mode);
    std::optional<GroupAction> action;
    if (c.group > 1)
    {
        try
        {
            action = planar_rotation_action(s, static_cast<std::size_t>(c.group));
        }
        catch (const std::invalid_argument& e)
        {
            throw ConfigError(e.what());
        }
    }
    const GroupAction* g = action ? &*action : nullptr;
    const auto strata = build_stratified_complex(s, c.truncation, op, g, tr);
    const auto ranks = homology_ranks(strata);
    std::vector<std::size_t> dims;
    for (const auto& st : strata)
        dims.push_back(st.basis.size());
    r.result["operator"] = to_string(op);
    r.result["dimensions"] = ranks_json(dims);
    r.result["ranks"] = ranks_json(ranks);
    r.add("complex", true);

    // Duality: delta homology in degree p against de Rham cohomology in 2n - p.
    const auto other_op = op == ComplexOperator::delta ? ComplexOperator::de_rham : ComplexOperator::delta;
    const auto other = homology_ranks(build_stratified_complex(s, c.truncation, other_op, g, tr));
    std::vector<std::size_t> reversed(other.rbegin(), other.rend());
    r.result["dual_operator"] = to_string(other_op);
    r.result["dual_ranks"] = ranks_json(other);
    std::ostringstream w;
    w << "ranks " << ranks_json(ranks).dump() << " vs reversed dual " << ranks_json(reversed).dump();
    r.add("star_duality", ranks == reversed, w.str());
}

inline MetricPerturbation default_metric_perturbation(int order)
{
    const auto c = circle_chart();
    MetricPerturbation p{CoefficientElement::cos_mode(c, 0, 2) * Rational(1, 4),
                         CoefficientElement::sin_mode(c, 0, 2) * Rational(1, 4),
                         CoefficientElement::cos_mode(c, 0, 2) * Rational(-1, 4), order};
    return p;
}

inline Json bool_json(bool b) { return Json(b); }

inline void run_cone_report(const RunConfig& c, Report& r)
{
    if (!(c.nash_tol > 0) || !(c.metric_tol > 0) || c.metric_rays < 1 || c.metric_order < 0)
        throw ConfigError("tolerances must be > 0, metric rays >= 1, metric order >= 0");
    const Link link = link_from_selector(c.link);
    const ConeSpace cone(link);
    Json lj;
    lj["name"] = link.name();
    lj["ambient_dim"] = link.ambient_dim();
    lj["radius_squared"] = link.radius_squared().get_str();
    lj["contact_form"] = link.contact_form() ? link.contact_form()->str() : "none";
    r.result["link"] = lj;
    r.add("unit_sphere", link.on_sphere(), "squared norm " + link.squared_norm().str());

    if (!link.contact_form())
        throw ConfigError("link '" + c.link + "' carries no contact form");
    const auto nd = contact_nondegeneracy(*link.contact_form());
    Json ndj;
    ndj["nonvanishing"] = nd.nonvanishing;
    ndj["exact"] = true;
    if (nd.witness_angle)
        ndj["witness_angle"] = *nd.witness_angle;
    r.result["nondegeneracy"] = ndj;
    r.add("contact_nondegenerate", nd.nonvanishing,
          nd.witness_angle ? "alpha vanishes at phi = " + std::to_string(*nd.witness_angle) : "");
    if (nd.nonvanishing)
    {
        const auto csf = make_cone_symplectic(cone, *link.contact_form());
        const auto li = liouville_identities(csf);
        Json ij;
        ij["total"] = csf.total.str();
        ij["closed"] = li.closed;
        ij["d_alpha_eq_2_omega_hat"] = li.contact_relation;
        ij["liouville_contraction"] = li.contraction;
        ij["liouville_scaling"] = li.lie_scaling;
        ij["exact_primitive"] = li.exact_primitive;
        r.result["identities"] = ij;
        r.add("conical_identities", li.all(), csf.total.str());
    }

    try
    {
        const auto tc = tangent_cone(cone);
        Json fj;
        fj["degree"] = degree_of_flatness(tc);
        fj["whole_circle"] = tc.flat.whole_circle;
        fj["flat_angles"] = tc.flat.angles;
        if (tc.flat.whole_circle)
            fj["convention"] = "a flat set equal to the whole link counts as one component";
        r.result["flatness"] = fj;
    }
    catch (const std::invalid_argument&)
    {
        r.result["flatness"] = "unsupported";
    }

    if (link.ambient_dim() == 3)
    {
        Json samples = Json::array();
        const std::vector<std::pair<std::string, std::array<double, 3>>> dirs{
            {"axis", {0, 0, 1}}, {"ray_phi0", {link.point(0)[0], link.point(0)[1], link.point(0)[2]}},
            {"tangent_phi0", {0, 1, 0}}};
        for (const auto& [name, v] : dirs)
        {
            const auto m = nash_cone_membership(cone, v, c.nash_tol);
            Json sj;
            sj["direction"] = name;
            sj["vector"] = v;
            sj["member"] = m.member;
            sj["min_distance"] = m.min_distance;
            samples.push_back(sj);
        }
        r.result["nash_samples"] = samples;
    }

    const auto pert = default_metric_perturbation(c.metric_order);
    const auto mc = metric_c1_check(pert, static_cast<std::size_t>(c.metric_rays), c.metric_tol);
    Json mj;
    mj["perturbation"] = {pert.xx.str(), pert.xy.str(), pert.yy.str()};
    mj["radial_order"] = pert.radial_order;
    mj["rays"] = mc.rays;
    mj["max_deviation"] = mc.max_deviation;
    mj["tolerance"] = mc.tolerance;
    r.result["metric_c1"] = mj;
    r.add("metric_c1", mc.passed,
          "deviation " + std::to_string(mc.max_deviation) + " at phi = " + std::to_string(mc.worst_angle));
}

inline void run_membership(const RunConfig& c, Report& r)
{
    const Rational theta = rational_from_config(c.theta, "theta");
    if (abs(theta) >= 1)
        throw ConfigError("theta must satisfy |theta| < 1");
    if (c.terms.empty())
        throw ConfigError("membership needs at least one --term a:b:num/den");
    ConeFunction f;
    try
    {
        f = ConeFunction::parse(c.terms);
    }
    catch (const std::exception& e)
    {
        throw ConfigError(e.what());
    }
    const bool smooth = membership(f, theta);
    r.result["function"] = f.str();
    r.result["theta"] = theta.get_str();
    r.result["smooth"] = smooth;
    r.result["answer"] = smooth ? "smooth" : "not smooth";
    r.add("query_answered", true);
}

inline void run_flatness(const RunConfig& c, Report& r)
{
    if (c.pairs && *c.pairs < 0)
        throw ConfigError("pairs must be >= 0");
    const Link link = c.pairs ? construct_flatness_link(*c.pairs) : link_from_selector(c.link);
    TangentCone tc = [&] {
        try
        {
            return tangent_cone(ConeSpace(link));
        }
        catch (const std::invalid_argument& e)
        {
            throw ConfigError(e.what());
        }
    }();
    const std::size_t deg = degree_of_flatness(tc);
    r.result["link"] = link.name();
    r.result["degree"] = deg;
    r.result["whole_circle"] = tc.flat.whole_circle;
    r.result["flat_angles"] = tc.flat.angles;
    if (tc.flat.whole_circle)
        r.result["convention"] = "a flat set equal to the whole link counts as one component";
    if (c.pairs)
    {
        const std::size_t want = *c.pairs == 0 ? 0 : static_cast<std::size_t>(2 * *c.pairs);
        r.add("prescribed_flat_rays", deg == want,
              "expected " + std::to_string(want) + " flat rays, found " + std::to_string(deg));
    }
    else
    {
        r.add("flatness_computed", true);
    }
}

inline void run_bump_check(const RunConfig& c, Report& r)
{
    if (!(c.epsilon > 0) || c.bump_samples < 2 || c.partition_samples < 1 || !(c.partition_tol > 0))
        throw ConfigError("bump-check needs epsilon > 0, samples >= 2 and tolerance > 0");
    const auto f = bump_on_cone(c.epsilon);
    const double eps = c.epsilon;
    bool bounds = true;
    bool support = true;
    bool monotone = true;
    std::string w_bounds, w_support, w_mono;
    double prev_chi = 1.0;
    const int n = c.bump_samples;
    for (int k = 0; k <= n; ++k)
    {
        const double t = 1.25 * eps * static_cast<double>(k) / n;
        const double v = f(t);
        if (!(v >= 0 && v <= 1) && bounds)
        {
            bounds = false;
            w_bounds = "f(" + std::to_string(t) + ") = " + std::to_string(v);
        }
        if (t >= eps && v != 0 && support)
        {
            support = false;
            w_support = "f(" + std::to_string(t) + ") = " + std::to_string(v);
        }
        if (t >= 2 * eps / 5 && t <= 4 * eps / 5)
        {
            const double chi = f.chi(t);
            if (chi > prev_chi && monotone)
            {
                monotone = false;
                w_mono = "chi rises at " + std::to_string(t);
            }
            prev_chi = chi;
        }
    }
    r.add("bump_bounds", bounds, w_bounds);
    r.add("bump_apex_value", f(0.0) == 1.0, "f(apex) = " + std::to_string(f(0.0)));
    r.add("bump_support", support, w_support);
    r.add("chi_monotone", monotone, w_mono);

    const std::vector<RadialPatch> cover{{0.0, 0.6 * eps, true}, {0.4 * eps, 1.0 * eps, false}};
    const auto pu = partition_of_unity(cover, eps);
    double worst = 0.0;
    bool nonneg = true;
    bool contained = true;
    std::string w_sub;
    for (int k = 0; k < c.partition_samples; ++k)
    {
        const double t = eps * static_cast<double>(k) / c.partition_samples;
        double sum = 0.0;
        for (std::size_t i = 0; i < pu.functions.size(); ++i)
        {
            const double v = pu.functions[i](t);
            sum += v;
            nonneg = nonneg && v >= 0;
            if (v != 0 && !pu.patches[i].contains(t) && contained)
            {
                contained = false;
                w_sub = "f_" + std::to_string(i) + "(" + std::to_string(t) + ") = " + std::to_string(v);
            }
        }
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    Json pj;
    pj["patches"] = pu.patches.size();
    pj["margin"] = pu.margin;
    pj["max_sum_error"] = worst;
    r.result["partition"] = pj;
    r.add("partition_sum", worst <= c.partition_tol, "max |sum - 1| = " + std::to_string(worst));
    r.add("partition_nonnegative", nonneg, "negative value");
    r.add("partition_support", contained, w_sub);
}

}   // namespace detail

/** Execute a configuration.  Throws ConfigError for invalid input. */
inline Report run(const RunConfig& c)
{
    Report r;
    r.config = c;
    const auto start = std::chrono::steady_clock::now();
    if (c.command == "verify")
        detail::run_verify(c, r);
    else if (c.command == "homology")
        detail::run_homology(c, r);
    else if (c.command == "cone-report")
        detail::run_cone_report(c, r);
    else if (c.command == "membership")
        detail::run_membership(c, r);
    else if (c.command == "flatness")
        detail::run_flatness(c, r);
    else if (c.command == "bump-check")
        detail::run_bump_check(c, r);
    else
        throw ConfigError("unknown command '" + c.command + "'");
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

/** Path of the JSON report: explicit output, else $CONEX_OUTPUT_DIR or "." plus <command>.json. */
inline std::filesystem::path report_path(const RunConfig& c)
{
    if (!c.output.empty())
        return c.output;
    const char* dir = std::getenv(output_dir_env);
    std::filesystem::path base = dir && *dir ? dir : ".";
    return base / (c.command + ".json");
}

/** Write via a temporary file in the same directory and rename over the target. */
inline void write_atomically(const std::filesystem::path& path, const std::string& text)
{
    const auto parent = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    std::filesystem::create_directories(parent);
    const auto tmp = parent / ("." + path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp.string());
        out << text;
        out.flush();
        if (!out)
            throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string summary_text(const Report& r)
{
    std::ostringstream os;
    os << "conex " << r.config.command << ": " << (r.passed() ? "PASS" : "FAIL") << "\n";
    for (const auto& c : r.checks)
    {
        os << "  [" << (c.passed ? "pass" : "FAIL") << "] " << c.name;
        if (!c.passed)
            os << "  witness: " << c.witness;
        os << "\n";
    }
    if (r.result.contains("ranks"))
        os << "  ranks: " << r.result["ranks"].dump() << "\n";
    if (r.result.contains("answer"))
        os << "  answer: " << r.result["answer"].get<std::string>() << "\n";
    if (r.result.contains("degree"))
        os << "  degree of flatness: " << r.result["degree"].dump() << "\n";
    os << "  elapsed: " << r.elapsed_ms << " ms\n";
    return os.str();
}

}   // namespace conex

#endif
