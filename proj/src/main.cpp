// main.cpp — Command-line entry point

#include <cstdio>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "escat/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Weak-field photon scattering and ground-state dynamics for "
                 "multi-level emitters in dielectric media"};
    std::string config_path, task_override, out_dir = ".";
    int threads = 1;
    bool check_only = false;
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--task", task_override, "Override the configured task");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--threads", threads, "Sweep worker threads");
    app.add_flag("--check", check_only, "Validate the configuration and exit");
    CLI11_PARSE(app, argc, argv);

    std::ifstream in(config_path);
    if (!in) {
        std::fprintf(stderr, "{\"error\":\"user\",\"message\":\"cannot read %s\"}\n",
                     config_path.c_str());
        return 1;
    }
    std::ostringstream buf;
    buf << in.rdbuf();

    escat::RunConfig config;
    try {
        config = escat::parse_config(buf.str());
    } catch (const escat::SchemaError& e) {
        std::fprintf(stderr, "{\"error\":\"schema\",\"message\":\"%s\"}\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "{\"error\":\"internal\",\"message\":\"%s\"}\n", e.what());
        return 2;
    }
    if (check_only) {
        std::printf("ok %s\n", escat::config_hash(config).c_str());
        return 0;
    }

    std::string error;
    const int code = escat::run(config, out_dir, threads, task_override, &error);
    if (code != 0) std::fprintf(stderr, "%s\n", error.c_str());
    return code;
}
