// SPDX-License-Identifier: Apache-2.0
//! \file uvnlos.cpp
//! Command-line front end: uvnlos run --config <path> --mode <mode> --out <dir>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "uvnlos/run.hpp"

namespace
{
void write_file(std::filesystem::path const& path, std::string const& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out)
        throw uvnlos::Error("cannot write " + path.string());
}

//! "T,W,U" -> node counts along vartheta, varpi and tau.
bool parse_nodes(std::string const& text, uvnlos::QuadratureSpec& quad)
{
    std::istringstream in(text);
    int v[3];
    char c1 = 0, c2 = 0;
    if (!(in >> v[0] >> c1 >> v[1] >> c2 >> v[2]) || c1 != ',' || c2 != ',')
        return false;
    in >> std::ws;
    if (!in.eof())
        return false;
    quad.n_vartheta = v[0];
    quad.n_varpi = v[1];
    quad.n_tau = v[2];
    return true;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Path loss of UV non-line-of-sight links around a cuboid obstacle"};
    app.require_subcommand(1);

    CLI::App* run_cmd = app.add_subcommand("run", "Evaluate a scenario and write results");
    std::string config_path;
    std::string mode_name;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::uint64_t photons = 0;
    std::string nodes;
    run_cmd->add_option("--config", config_path, "Scenario JSON file")->required();
    run_cmd
        ->add_option("--mode", mode_name,
                     "analytic | mcpt | compare | sweep-range | sweep-offset")
        ->required();
    run_cmd->add_option("--out", out_dir, "Output directory")->required();
    auto* seed_opt = run_cmd->add_option("--seed", seed, "MCPT seed");
    auto* photons_opt = run_cmd->add_option("--photons", photons, "MCPT photon count");
    run_cmd->add_option("--nodes", nodes,
                        "Node counts T,W,U along vartheta, varpi and tau");

    CLI11_PARSE(app, argc, argv);

    try
    {
        uvnlos::RunMode const mode = uvnlos::run_mode_from_string(mode_name);
        uvnlos::ScenarioConfig config = uvnlos::load_config(config_path);
        if (*seed_opt)
            config.mcpt.rng_seed = seed;
        if (*photons_opt)
            config.mcpt.n_photons = photons;
        if (!nodes.empty() && !parse_nodes(nodes, config.scene.quad))
            throw uvnlos::ValidationError("--nodes expects three integers T,W,U");

        uvnlos::ValidityReport report = uvnlos::validate_quadrature(config.scene.quad);
        for (auto const& v : uvnlos::validate_mcpt(config.mcpt).violations)
            report.violations.push_back(v);
        if (!report.ok())
            throw uvnlos::ValidationError(report.summary());

        uvnlos::RunOutput const result = uvnlos::run(config, mode);

        std::filesystem::path const dir(out_dir);
        std::filesystem::create_directories(dir);
        write_file(dir / "result.csv", uvnlos::format_csv(result.rows));
        write_file(dir / "summary.json", result.summary_json);
        if (!result.svg.empty())
            write_file(dir / "plot.svg", result.svg);

        std::cout << uvnlos::format_csv(result.rows);
        if (result.failures)
        {
            std::cerr << result.failures << " of " << result.rows.size()
                      << " points failed; see summary.json\n";
            return 3;
        }
        return 0;
    }
    catch (uvnlos::ParseError const& e)
    {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    }
    catch (uvnlos::ValidationError const& e)
    {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
