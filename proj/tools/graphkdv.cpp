#include <CLI11.hpp>
#include <iostream>

#include "graphkdv/config.hpp"
#include "graphkdv/runner.hpp"

int main(int argc, char** argv) {
    using namespace graphkdv;
    CLI::App app{"Spectral workbench for stationary KdV waves on star graphs"};
    std::string task, config_path, out;
    std::optional<double> Z, L;
    std::optional<int> N;
    app.add_option("task", task, "profile | spectrum | modes | evolve | resolvent | audit | all | sweep")
        ->required()
        ->check(CLI::IsMember(task_names()));
    app.add_option("--config", config_path, "INI configuration file (defaults are used when omitted)");
    app.add_option("--Z", Z, "vertex strength");
    app.add_option("--L", L, "truncation length");
    app.add_option("--N", N, "grid intervals per edge");
    app.add_option("--out", out, "output directory");
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "no progress lines");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        cfg.task = task;
        if (Z) cfg.Z = *Z;
        if (L) cfg.L = *L;
        if (N) cfg.N = *N;
        if (!out.empty()) cfg.output_dir = out;
        cfg.validate();
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    }

    const RunOutcome r = run(cfg, true, quiet ? nullptr : &std::cerr);
    if (r.exit_code == exit_usage) {
        std::cerr << "usage error: " << r.report.value("error", std::string()) << "\n";
        return exit_usage;
    }
    for (const auto& [name, t] : r.report["tasks"].items()) {
        std::cout << name << ": " << t["status"].get<std::string>();
        if (t.contains("error")) std::cout << " (" << t["error"].get<std::string>() << ")";
        std::cout << "\n";
        if (t.contains("checks"))
            for (const auto& ch : t["checks"])
                if (!ch["passed"].get<bool>()) std::cout << "  failed check: " << ch["name"].get<std::string>() << " = "
                                                         << ch["value"].dump() << "\n";
    }
    if (r.report.contains("sweep_checks"))
        for (const auto& ch : r.report["sweep_checks"])
            if (!ch["passed"].get<bool>()) std::cout << "  failed sweep check: " << ch["name"].get<std::string>() << "\n";
    std::cout << "report: " << cfg.output_dir << "/report.json (" << r.report["status"].get<std::string>() << ")\n";
    return r.exit_code;
}
