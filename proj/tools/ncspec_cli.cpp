#include "ncspec/cli/run.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

int main(int argc, char** argv) {
  CLI::App app{"Quasideterminants, row characteristic polynomials and spectral decompositions over noncommutative rings"};
  ncspec::cli::RunOptions ro;
  std::string in_file;
  std::string ring, command;
  double tol = 0.0;
  int probe = 0;
  app.add_option("--ring", ring, "rational | complex | quaternion-exact | quaternion-float | fock");
  app.add_option("--command", command, "qdet | inverse | charpoly | ch-verify | spectral | funcmat | identities");
  app.add_option("--in", in_file, "read the job from FILE instead of stdin");
  app.add_option("--tol", tol, "absolute tolerance")->check(CLI::PositiveNumber);
  app.add_option("--probe", probe, "oscillator probe levels")->check(CLI::PositiveNumber);
  app.add_flag("--pretty", ro.pretty, "indent output and print entries as strings");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help exits 0; every flag error maps to exit 1.
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (app.count("--ring")) ro.ring = ring;
  if (app.count("--command")) ro.command = command;
  if (app.count("--tol")) ro.tol = tol;
  if (app.count("--probe")) ro.probe = probe;

  std::string text;
  if (!in_file.empty()) {
    std::ifstream f(in_file);
    if (!f) {
      std::cerr << "cannot open " << in_file << "\n";
      return 1;
    }
    text.assign(std::istreambuf_iterator<char>(f), {});
  } else {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  }

  nlohmann::json job;
  ncspec::cli::Outcome out;
  try {
    job = text.find_first_not_of(" \t\r\n") == std::string::npos ? nlohmann::json::object() : nlohmann::json::parse(text);
    if (!job.is_object()) throw ncspec::Error("job must be a JSON object");
    out = ncspec::cli::run(job, ro);
  } catch (const std::exception& e) {
    out.report = {{"command", ro.command.value_or("")}, {"ring", ro.ring.value_or("")}, {"status", "error"},
                  {"message", std::string("malformed job: ") + e.what()}, {"results", nlohmann::json::object()},
                  {"residuals", nlohmann::json::object()}};
    out.exit_code = 1;
  }
  std::cout << out.report.dump(ro.pretty ? 2 : -1) << "\n";
  return out.exit_code;
}
