#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "jang/errors.hpp"
#include "jang/pipeline.hpp"

namespace {

jang::Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw jang::ConfigError("cannot read " + path);
    return jang::Json::parse(in);
}

std::string default_out_dir() {
    const char* env = std::getenv("JANG_PENROSE_OUT");
    return env ? env : "";
}

void write_report(const jang::Json& j, const std::string& out_dir, const std::string& name) {
    std::cout << j.dump(2) << std::endl;
    if (out_dir.empty()) return;
    std::filesystem::create_directories(out_dir);
    std::ofstream out(std::filesystem::path(out_dir) / name);
    out << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized Jang equation solver and Penrose inequality verifier for "
                 "spherically symmetric initial data"};
    app.require_subcommand(1);

    std::string config_path, configs_path, data_path, out_dir = default_out_dir();
    int workers = 4;

    auto* run_cmd = app.add_subcommand("run", "execute one configured pipeline run");
    run_cmd->add_option("--config", config_path, "run configuration JSON")->required();
    run_cmd->add_option("--out", out_dir, "output directory for reports and CSV profiles");

    auto* batch_cmd = app.add_subcommand("batch", "execute a list of runs concurrently");
    batch_cmd->add_option("--configs", configs_path, "JSON array of run configurations")
        ->required();
    batch_cmd->add_option("--workers", workers, "concurrent runs");
    batch_cmd->add_option("--out", out_dir, "output directory for the aggregate report");

    auto* validate_cmd = app.add_subcommand("validate", "validate a data descriptor only");
    validate_cmd->add_option("--data", data_path, "data descriptor JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            auto cfg = jang::parse_run_config(read_json(config_path));
            if (!out_dir.empty() && cfg.out_dir.empty()) cfg.out_dir = out_dir;
            auto rep = jang::run(cfg);
            write_report(rep.json, out_dir, "run_report.json");
            return rep.exit_code;
        }
        if (batch_cmd->parsed()) {
            auto list = read_json(configs_path);
            const auto& arr = list.is_array() ? list : list.at("runs");
            std::vector<jang::RunConfig> cfgs;
            for (const auto& j : arr) cfgs.push_back(jang::parse_run_config(j));
            auto rep = jang::run_batch(cfgs, workers);
            write_report(rep.json, out_dir, "batch_report.json");
            return rep.exit_code;
        }
        if (validate_cmd->parsed()) {
            jang::Json cfg = {{"data", read_json(data_path)},
                              {"checks", jang::Json::array({"validate"})}};
            auto rep = jang::run(jang::parse_run_config(cfg));
            write_report(rep.json, out_dir, "validate_report.json");
            return rep.exit_code;
        }
    } catch (const jang::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return jang::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return jang::kExitConfigError;
    }
    return jang::kExitConfigError;
}
