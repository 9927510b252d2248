// conex command-line front end.  Exit codes: 0 all checks pass, 1 a check
// failed, 2 invalid configuration.

#include "conex/report.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void common_output(CLI::App* sub, conex::RunConfig& c)
{
    sub->add_option("--output,-o", c.output, "JSON report path (default: $CONEX_OUTPUT_DIR/<command>.json)");
    sub->add_flag("--with-timing", c.with_timing, "include timing_ms in the JSON report");
}

}   // namespace

int main(int argc, char** argv)
{
    conex::RunConfig c;
    CLI::App app{"Exact exterior calculus on cones: identities, Poisson homology, smooth structures"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "delta / star / d identity suite on random forms");
    verify->add_option("--chart", c.chart, "r2 | r4 | r6");
    verify->add_option("--degree", c.degree, "maximal coefficient degree");
    verify->add_option("--count", c.count, "forms per identity");
    verify->add_option("--seed", c.seed, "random seed");
    common_output(verify, c);

    auto* homology = app.add_subcommand("homology", "ranks of the truncated delta or de Rham complex");
    homology->add_option("--chart", c.chart, "r2 | r4 | r6");
    homology->add_option("--trunc,-D", c.truncation, "truncation degree D");
    homology->add_option("--operator", c.op, "delta | deRham");
    homology->add_option("--truncation-mode", c.truncation_mode, "total | coefficient");
    homology->add_option("--group,-k", c.group, "order of the planar rotation group Z_k (1, 2, 3, 4, 6)");
    common_output(homology, c);

    auto* cone = app.add_subcommand("cone-report", "conical symplectic identities and cone geometry of a link");
    cone->add_option("--link", c.link, "flat | quadric | latitude:<q> | hopf:<a>,<b> | flat-pairs:<k> | cos2");
    cone->add_option("--nash-tol", c.nash_tol, "Nash cone tolerance");
    cone->add_option("--metric-tol", c.metric_tol, "metric C1 tolerance");
    cone->add_option("--metric-rays", c.metric_rays, "rays sampled by the metric check");
    cone->add_option("--metric-order", c.metric_order, "radial order of the metric perturbation");
    common_output(cone, c);

    auto* member = app.add_subcommand("membership", "is f smooth on the cone over the latitude circle z = theta");
    member->add_option("--theta", c.theta, "latitude as a rational");
    member->add_option("--term", c.terms, "a:b:num/den, meaning q t^a (e^{ib phi} + e^{-ib phi})")->take_all();
    common_output(member, c);

    auto* flat = app.add_subcommand("flatness", "degree of flatness of a circle link");
    flat->add_option("--link", c.link, "link selector");
    flat->add_option("--pairs", c.pairs, "construct a link with this many flat pairs");
    common_output(flat, c);

    auto* bump = app.add_subcommand("bump-check", "apex bump function and radial partition of unity");
    bump->add_option("--epsilon", c.epsilon, "bump radius");
    bump->add_option("--samples", c.bump_samples, "bump samples");
    bump->add_option("--partition-samples", c.partition_samples, "partition samples");
    bump->add_option("--partition-tol", c.partition_tol, "partition sum tolerance");
    common_output(bump, c);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    for (auto* sub : app.get_subcommands())
        c.command = sub->get_name();

    try
    {
        const conex::Report report = conex::run(c);
        const auto path = conex::report_path(c);
        conex::write_atomically(path, conex::to_json(report).dump(2) + "\n");
        std::cout << conex::summary_text(report) << "  report: " << path.string() << "\n";
        return report.exit_code();
    }
    catch (const conex::ConfigError& e)
    {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
