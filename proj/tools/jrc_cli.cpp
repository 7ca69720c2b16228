#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "jrc/harness/run.hpp"
#include "jrc/harness/sensing.hpp"
#include "jrc/io.hpp"
#include "jrc/waveforms/de_msqp.hpp"

using namespace jrc;
using nlohmann::json;

namespace {

int fail_json(const json& j, int code) {
    std::cerr << j.dump() << '\n';
    return code;
}

int config_error(const harness::ConfigError& e) {
    json j;
    j["error"] = "invalid-config";
    j["fields"] = json::array();
    for (const auto& f : e.errors()) j["fields"].push_back({{"field", f.field}, {"message", f.message}});
    return fail_json(j, 2);
}

struct Overrides {
    std::optional<std::uint64_t> seed, trials;
    std::optional<double> scale;
    std::string out;
    bool quiet = false;
};

harness::ExperimentConfig load(const std::string& path, const Overrides& o) {
    auto cfg = harness::load_config(path);
    if (o.seed) cfg.base_seed = *o.seed;
    if (o.trials) cfg.trials = *o.trials;
    if (o.scale) cfg.scale = *o.scale;
    harness::validate(cfg);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint radar-communication waveform simulator"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;
    auto add_overrides = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", ov.seed, "Override base_seed");
        sub->add_option("--trials", ov.trials, "Override trials")->check(CLI::PositiveNumber);
        sub->add_option("--scale", ov.scale, "Override scale, in (0, 1]");
    };

    auto* run = app.add_subcommand("run", "Run a scenario and write CSV rows");
    add_overrides(run);
    run->add_option("--out", ov.out, "Output CSV path (default stdout)");
    run->add_flag("--quiet", ov.quiet, "No progress on stderr");

    auto* val = app.add_subcommand("validate", "Check a config and exit");
    add_overrides(val);

    app.add_subcommand("list-scenarios", "Print the scenario names");

    auto* exp = app.add_subcommand("export-waveform", "Dump the transmit unit of one configured waveform");
    std::size_t index = 0;
    std::string format = "bin", wave_out;
    exp->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    exp->add_option("--index", index, "Waveform index in the config");
    exp->add_option("--format", format, "bin or csv")->check(CLI::IsMember({"bin", "csv"}));
    exp->add_option("--out", wave_out, "Output path")->required();
    exp->add_option("--seed", ov.seed, "Payload seed for DE-MS-QP frames");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("list-scenarios")) {
            for (const auto& n : harness::scenario_names()) std::cout << n << '\n';
            return 0;
        }
        if (app.got_subcommand("validate")) {
            const auto cfg = load(config_path, ov);
            std::cout << json{{"status", "ok"}, {"scenario", harness::scenario_name(cfg.scenario)}}.dump() << '\n';
            return 0;
        }
        if (app.got_subcommand("run")) {
            const auto cfg = load(config_path, ov);
            harness::Progress progress;
            if (!ov.quiet) progress = [](const std::string& s) { std::cerr << "done: " << s << '\n'; };
            const auto rows = harness::run(cfg, progress);
            if (ov.out.empty())
                std::cout << harness::to_csv(rows);
            else
                harness::emit(rows, ov.out);
            return 0;
        }
        if (app.got_subcommand("export-waveform")) {
            auto cfg = harness::apply_scale(harness::load_config(config_path));
            if (index >= cfg.waveforms.size()) throw std::invalid_argument("--index out of range");
            const auto chain = harness::make_chain(cfg.waveforms[index], cfg.search_budget, cfg.base_seed);
            ComplexSequence x = chain.tx;
            if (chain.frame) x = de_msqp_build(*chain.frame, random_payload(*chain.frame, ov.seed.value_or(cfg.base_seed)).symbols);
            if (format == "bin")
                io::write_waveform_binary(wave_out, x);
            else
                io::write_waveform_csv(wave_out, x);
            return 0;
        }
    } catch (const harness::ConfigError& e) {
        return config_error(e);
    } catch (const std::invalid_argument& e) {
        return fail_json({{"error", "invalid-argument"}, {"message", e.what()}}, 2);
    } catch (const std::exception& e) {
        return fail_json({{"error", "runtime"}, {"message", e.what()}}, 1);
    }
    return 0;
}
