#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "magbar/errors.hpp"

using namespace magbar;
using namespace magbar::cli;

namespace {

enum Exit { kOk = 0, kNumerical = 1, kUsage = 2, kResource = 3 };

void add_window(CLI::App* sub, WindowArgs& w) {
    sub->add_option("--b", w.b, "field strength")->check(CLI::PositiveNumber);
    sub->add_option("--n", w.n, "Landau level index")->check(CLI::Range(1, 50));
    sub->add_option("--E", w.E, "energy inside the window, or 'mid'");
    sub->add_option("--reading", w.reading, "distance reading for delta0")->check(CLI::IsMember({"min", "max"}));
    sub->add_option("--delta0-fraction", w.delta0_fraction, "working delta0 as a fraction of the supremum")
        ->check(CLI::Range(1e-6, 1.0));
}

// key=value pairs of every option of `sub`, defaults included.
std::vector<std::pair<std::string, std::string>> echo_config(const CLI::App* sub) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(sub->config_to_str(true, false));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '[' || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto key = line.substr(0, eq), value = line.substr(eq + 1);
        const auto dot = key.rfind('.');
        if (dot != std::string::npos) key = key.substr(dot + 1);
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        out.emplace_back(key, value);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Band structure and spectral checks for the magnetic barrier operator"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    app.set_config("--config", "", "key=value config file; flags override it");

    std::string format = "csv", out_dir = ".";
    unsigned jobs = 0;
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--jobs", jobs, "worker threads (0 = all cores)");

    std::function<void(Report&)> run;

    BandsArgs bands;
    auto* s = app.add_subcommand("bands", "trace band functions and write plot data");
    s->add_option("--b", bands.b)->check(CLI::PositiveNumber);
    s->add_option("--kmin", bands.kmin);
    s->add_option("--kmax", bands.kmax);
    s->add_option("--nbands", bands.nbands)->check(CLI::Range(1, 60));
    s->add_option("--samples", bands.samples)->check(CLI::Range(8, 100000));
    s->add_option("--N", bands.N, "grid cells")->check(CLI::Range(100, 1000000));
    s->add_flag("--no-richardson", bands.no_richardson);
    s->callback([&] { run = [&](Report& r) { cmd_bands(bands, jobs, r); }; });

    MinimaArgs minima;
    s = app.add_subcommand("minima", "minima of the even bands and effective masses");
    s->add_option("--b", minima.b)->check(CLI::PositiveNumber);
    s->add_option("--jmax", minima.jmax)->check(CLI::Range(1, 30));
    s->add_option("--N", minima.N)->check(CLI::Range(100, 1000000));
    s->callback([&] { run = [&](Report& r) { cmd_minima(minima, jobs, r); }; });

    AiryArgs airy;
    s = app.add_subcommand("airy", "Airy asymptotics for k -> -infinity");
    s->add_option("--b", airy.b)->check(CLI::PositiveNumber);
    s->add_option("--ks", airy.ks, "comma-separated negative wave numbers")->delimiter(',');
    s->add_option("--jmax", airy.jmax)->check(CLI::Range(1, 30));
    s->callback([&] { run = [&](Report& r) { cmd_airy(airy, jobs, r); }; });

    HoArgs ho;
    s = app.add_subcommand("ho", "oscillator asymptotics for k -> +infinity");
    s->add_option("--b", ho.b)->check(CLI::PositiveNumber);
    s->add_option("--j", ho.j)->check(CLI::Range(1, 30));
    s->add_option("--kmin", ho.kmin);
    s->add_option("--kmax", ho.kmax);
    s->add_option("--points", ho.points)->check(CLI::Range(2, 1000));
    s->callback([&] { run = [&](Report& r) { cmd_ho(ho, jobs, r); }; });

    MourreArgs mourre;
    s = app.add_subcommand("mourre", "Mourre window, constant and edge currents");
    add_window(s, mourre.window);
    s->add_option("--states", mourre.states)->check(CLI::Range(0, 1000000));
    s->add_option("--seed", mourre.seed);
    s->add_option("--evolve-t", mourre.evolve_t);
    s->callback([&] { run = [&](Report& r) { cmd_mourre(mourre, jobs, r); }; });

    BudgetArgs budget;
    s = app.add_subcommand("budget", "perturbation budget of a Mourre window");
    add_window(s, budget.window);
    s->add_option("--delta-fraction", budget.delta_fraction)->check(CLI::Range(1e-6, 1.0));
    s->add_option("--c-factor", budget.c_factor)->check(CLI::Range(1e-6, 1.0));
    s->callback([&] { run = [&](Report& r) { cmd_budget(budget, jobs, r); }; });

    Edge2dArgs edge;
    s = app.add_subcommand("edge2d", "edge current of the perturbed two-dimensional operator");
    add_window(s, edge.window);
    s->add_option("--q", edge.q, "electric perturbation shape amplitude");
    s->add_option("--a1", edge.a1, "x component of the magnetic perturbation");
    s->add_option("--a2", edge.a2, "y component of the magnetic perturbation");
    s->add_option("--harmonic", edge.harmonic)->check(CLI::Range(1, 20));
    s->add_option("--budget-fraction", edge.budget_fraction)->check(CLI::Range(0.0, 1.0));
    s->add_option("--hx", edge.hx)->check(CLI::PositiveNumber);
    s->add_option("--dk", edge.dk)->check(CLI::PositiveNumber);
    s->callback([&] { run = [&](Report& r) { cmd_edge2d(edge, jobs, r); }; });

    LocalizeArgs loc;
    s = app.add_subcommand("localize", "Gaussian envelopes and strip localization");
    add_window(s, loc.window);
    s->add_option("--eps", loc.eps)->check(CLI::Range(1e-3, 0.5));
    s->add_option("--states", loc.states)->check(CLI::Range(0, 1000000));
    s->add_option("--seed", loc.seed);
    s->add_option("--per-band", loc.per_band)->check(CLI::Range(1, 10000));
    s->add_option("--scan", loc.scan, "comma-separated field strengths")->delimiter(',');
    s->add_option("--scan-states", loc.scan_states)->check(CLI::Range(0, 100000));
    s->callback([&] { run = [&](Report& r) { cmd_localize(loc, jobs, r); }; });

    Count1dArgs c1;
    s = app.add_subcommand("count1d", "eigenvalue counting for the reduced one-dimensional operator");
    s->add_option("--alpha", c1.alpha)->check(CLI::Range(1e-3, 1.999));
    s->add_option("--ell", c1.ell)->check(CLI::PositiveNumber);
    s->add_option("--m", c1.m)->check(CLI::PositiveNumber);
    s->add_option("--lambdas", c1.lambdas, "comma-separated spectral parameters")->delimiter(',');
    s->add_option("--step", c1.h, "grid step")->check(CLI::PositiveNumber);
    s->add_option("--bs-instances", c1.bs_instances)->check(CLI::Range(0, 10000));
    s->add_option("--seed", c1.seed);
    s->callback([&] { run = [&](Report& r) { cmd_count1d(c1, jobs, r); }; });

    Count2dArgs c2;
    s = app.add_subcommand("count2d", "eigenvalue counting below the bottom of the spectrum");
    s->add_option("--b", c2.b)->check(CLI::PositiveNumber);
    s->add_option("--alpha", c2.alpha)->check(CLI::Range(1e-3, 1.999));
    s->add_option("--amplitude", c2.amplitude)->check(CLI::PositiveNumber);
    s->add_option("--lambda-max", c2.lambda_max, "relative to the threshold");
    s->add_option("--lambda-min", c2.lambda_min, "relative to the threshold");
    s->add_option("--points", c2.points)->check(CLI::Range(2, 100));
    s->add_option("--hx", c2.hx)->check(CLI::PositiveNumber);
    s->add_option("--hy", c2.hy)->check(CLI::PositiveNumber);
    s->add_option("--x-half", c2.x_half)->check(CLI::PositiveNumber);
    s->add_option("--extent", c2.extent)->check(CLI::PositiveNumber);
    s->add_option("--max-unknowns", c2.max_unknowns);
    s->add_flag("--refine", c2.refine, "repeat the largest lambda on a grid refined by sqrt(2)");
    s->callback([&] { run = [&](Report& r) { cmd_count2d(c2, jobs, r); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kUsage;
    }

    const CLI::App* sub = app.get_subcommands().front();
    Report report;
    report.command = sub->get_name();
    report.config = echo_config(sub);
    report.config.insert(report.config.begin(), {{"format", format}, {"jobs", std::to_string(jobs)}});

    int code = kOk;
    try {
        std::filesystem::create_directories(out_dir);
        run(report);
        if (!report.ok) code = kNumerical;
    } catch (const DomainError& e) {
        report.ok = false, report.failure = e.what(), code = kUsage;
    } catch (const ConfigurationError& e) {
        report.ok = false, report.failure = e.what(), code = kUsage;
    } catch (const PreconditionError& e) {
        report.ok = false, report.failure = e.what(), code = kUsage;
    } catch (const ResolutionError& e) {
        report.ok = false, report.failure = e.what(), code = kResource;
    } catch (const CapabilityError& e) {
        report.ok = false, report.failure = e.what(), code = kResource;
    } catch (const std::bad_alloc&) {
        report.ok = false, report.failure = "out of memory", code = kResource;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kResource;
    } catch (const std::exception& e) {
        report.ok = false, report.failure = e.what(), code = kNumerical;
    }

    try {
        write_report(report, out_dir, format == "json" ? Format::Json : Format::Csv);
    } catch (const std::exception& e) {
        std::cerr << "error: cannot write output: " << e.what() << "\n";
        return kResource;
    }
    print_summary(report);
    if (!report.failure.empty()) std::cerr << "FAILED: " << report.failure << "\n";
    return code;
}
