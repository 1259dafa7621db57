#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

struct Common {
    std::string config;
    std::string out = ".";
    bool force = false;
    std::optional<std::uint64_t> seed;
    std::string threads = "auto";
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "JSON configuration file");
    sub->add_option("--out", c.out, "output directory (created if missing)");
    sub->add_flag("--force", c.force, "overwrite existing output files");
    sub->add_option("--seed", c.seed, "RNG seed, overrides the config value");
    sub->add_option("--threads", c.threads, "worker threads: a positive integer or 'auto'");
}

cli::Context make_context(const Common& c) {
    cli::Context ctx;
    if (!c.config.empty()) ctx.config = cli::load_config(c.config);
    ctx.out_dir = c.out;
    ctx.force = c.force;
    ctx.seed = c.seed;
    if (c.threads != "auto") {
        int n = 0;
        try {
            std::size_t used = 0;
            n = std::stoi(c.threads, &used);
            if (used != c.threads.size()) n = 0;
        } catch (const std::exception&) {
            n = 0;
        }
        if (n < 1) throw cli::CliError(cli::kUsage, "--threads must be a positive integer or 'auto'");
        ts_set_threads(n);
    }
    return ctx;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-spectra inverse problems for y'''' - (p y')' + q y on [0, 1]", "twospec"};
    app.set_version_flag("--version", std::string(ts_version()));
    app.require_subcommand(1);

    Common common;

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues (and optionally eigenfunctions) of a pair");
    add_common(spectrum, common);

    auto* inverse = app.add_subcommand("inverse", "recover the unknown coefficient from two spectra");
    add_common(inverse, common);

    auto* riesz = app.add_subcommand("riesz-check", "Riesz-basis perturbation check for two pairs");
    add_common(riesz, common);

    std::string estimate;
    auto* verify = app.add_subcommand("verify", "numerical check of one asymptotic estimate");
    add_common(verify, common);
    verify->add_option("--estimate", estimate, "a1|a2|b1|b2|eq1|eq2|sup|loc|form")
        ->required()
        ->check(CLI::IsMember({"a1", "a2", "b1", "b2", "eq1", "eq2", "sup", "loc", "form"}));

    cli::ScanArgs scan;
    std::vector<double> range;
    auto* degenerate = app.add_subcommand("degenerate-scan", "flag multiple eigenvalues along constant a1");
    add_common(degenerate, common);
    degenerate->add_option("--a1-range", range, "lo hi")->expected(2)->required();
    degenerate->add_option("--steps", scan.steps, "grid intervals")->required();
    degenerate->add_flag("--pi2", scan.pi2_units, "read the range in units of pi^2");
    degenerate->add_option("--a2", scan.a2, "constant q");
    degenerate->add_option("--n-max", scan.n_max, "eigenvalues per boundary kind");
    degenerate->add_option("--tol", scan.tol, "relative gap tolerance");

    int trials = 0;
    auto* probe = app.add_subcommand("probe", "uniqueness probe over random perturbations");
    add_common(probe, common);
    probe->add_option("--trials", trials, "number of random trials");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kUsage;
    }

    try {
        const cli::Context ctx = make_context(common);
        if (spectrum->parsed()) return cli::run_spectrum(ctx);
        if (inverse->parsed()) {
            const std::string dir =
                common.config.empty() ? "." : std::filesystem::path(common.config).parent_path().string();
            return cli::run_inverse(ctx, dir.empty() ? "." : dir);
        }
        if (riesz->parsed()) return cli::run_riesz(ctx);
        if (verify->parsed()) return cli::run_verify(ctx, estimate);
        if (degenerate->parsed()) {
            scan.lo = range.at(0);
            scan.hi = range.at(1);
            return cli::run_scan(ctx, scan);
        }
        if (probe->parsed()) return cli::run_probe(ctx, trials);
    } catch (const cli::CliError& e) {
        std::fprintf(stderr, "twospec: %s\n", e.what());
        return e.code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "twospec: internal error: %s\n", e.what());
        return cli::kNumeric;
    }
    return cli::kUsage;
}
