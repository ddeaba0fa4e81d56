// Command-line front end. All numerical work happens in ftnet::cli::run.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ftnet/cli.hpp"

namespace {

int usage_error(const std::string& message) {
  std::cerr << ftnet::cli::error_payload("Validation", message).dump() << "\n";
  return ftnet::cli::kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Fermat-Torricelli networks: forward, inverse and plasticity problems"};
  std::string command;
  std::string input_path;
  std::string output_path;
  double tol = 0.0;
  std::uint64_t seed = 0;
  int sweep = 0;
  ftnet::cli::Options options;

  app.add_option("command", command, "solve | inverse | mixed-inverse | plasticity-hexa | plasticity-quad | angles | verify")
      ->required();
  app.add_option("--input", input_path, "Problem document (default: stdin)");
  app.add_option("--output", output_path, "Result file (default: stdout)");
  auto* tol_opt = app.add_option("--tol", tol, "KKT tolerance (default 1e-10)");
  auto* seed_opt = app.add_option("--seed", seed, "Oracle seed");
  auto* sweep_opt = app.add_option("--sweep", sweep, "Emit CSV with this many free-weight samples");
  app.add_flag("--oracle", options.oracle, "Attach the brute-force oracle gap");
  app.add_flag("--degrees", options.degrees, "Angles in the document are in degrees");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return usage_error(e.what());
  }
  if (*tol_opt) options.tol = tol;
  if (*seed_opt) options.seed = seed;
  if (*sweep_opt) options.sweep = sweep;

  std::string input;
  if (input_path.empty() || input_path == "-") {
    input.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(input_path);
    if (!in) return usage_error("cannot read " + input_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    input = buf.str();
  }

  const ftnet::cli::Outcome outcome = ftnet::cli::run(command, options, input);
  if (!outcome.out.empty()) {
    if (output_path.empty() || output_path == "-") {
      std::cout << outcome.out;
    } else {
      std::ofstream out(output_path);
      if (!(out << outcome.out)) return usage_error("cannot write " + output_path);
    }
  }
  std::cerr << outcome.err;
  return outcome.exit_code;
}
