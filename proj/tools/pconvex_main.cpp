// pconvex: command-line driver for the p-convexity analysis toolkit.
//
//   pconvex run <instance.json> [--seed N] [--out report.json] [--replay witness.json]
//   pconvex ew  <instance.json> --problem NAME --csv out.csv [--seed N]
//
// Exit codes: 0 all checks as expected, 2 expected counterexamples found
// (informational), 1 at least one check missed its expectation, 64 parse or
// validation errors.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pconvex/runner.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-convexity analysis toolkit"};
  app.require_subcommand(1);

  std::string instance_path;
  std::string out_path;
  std::string replay_path;
  std::string problem_name;
  std::string csv_path;
  std::uint64_t seed = pconvex::kDefaultSeed;

  CLI::App* run = app.add_subcommand("run", "run the checks of an instance");
  run->add_option("instance", instance_path, "instance JSON file")->required();
  run->add_option("--seed", seed, "search seed")->envname("PCONVEX_SEED");
  run->add_option("--out", out_path, "write the report here instead of stdout");
  run->add_option("--replay", replay_path,
                  "revalidate a witness JSON file against the instance");

  CLI::App* ew = app.add_subcommand("ew", "solve a problem and emit its CSV");
  ew->add_option("instance", instance_path, "instance JSON file")->required();
  ew->add_option("--problem", problem_name, "problem name")->required();
  ew->add_option("--csv", csv_path, "output CSV path")->required();
  ew->add_option("--seed", seed, "search seed")->envname("PCONVEX_SEED");

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string bytes = read_file(instance_path);
    const pconvex::Instance inst = pconvex::parse_instance_text(bytes);

    if (run->parsed()) {
      if (!replay_path.empty()) {
        const nlohmann::json doc = nlohmann::json::parse(read_file(replay_path));
        std::string message;
        const bool ok = pconvex::replay_against_instance(inst, doc, message);
        std::cout << message << "\n";
        return ok ? 0 : 1;
      }
      pconvex::RunReport report =
          pconvex::run_instance(inst, pconvex::digest_bytes(bytes), seed);
      const std::string text = report.to_json().dump(2) + "\n";
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open '" + out_path + "'");
        out << text;
      }
      return report.exit_code;
    }

    // ew subcommand
    pconvex::EfficiencyReport report = pconvex::solve_problem(inst, problem_name);
    pconvex::emit_ew_csv(report, csv_path);
    std::cout << "wrote " << csv_path << " ("
              << report.weakly_efficient.size() << " weakly efficient of "
              << report.grid.total() - report.excluded
              << " in-domain grid points)\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "pconvex: " << e.what() << "\n";
    return 64;
  }
}
