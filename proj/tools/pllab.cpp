// pllab: norms, tensor-norm brackets, the verification suite and the
// property sweeps from the command line.
//
//   pllab verify-paper --n-max 2 --format csv
//   pllab --command pl --input case.json --budget 400 --seed 3
//
// Exit codes: 0 all pass, 1 assertion violation, 2 bracket gap only,
// 3 input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pllab/errors.hpp"
#include "pllab/serialize.hpp"
#include "pllab/suites.hpp"

namespace {

constexpr int kInputError = 3;

std::string shell_quote(const std::string& s) {
  if (!s.empty() && s.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-_./=:+") ==
                        std::string::npos)
    return s;
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

std::string read_input(const std::string& input) {
  const auto first = input.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (input[first] == '{' || input[first] == '[')) return input;
  std::ifstream in(input);
  if (!in) throw pllab::InputError("cannot open input document '" + input + "'", "");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PL/L space norm lab"};
  std::string command, positional, input, format = "json", pairing = "row-major", only_case;
  pllab::RunOptions options;
  app.add_option("command_name", positional, "Command (alternative to --command)")
      ->check(CLI::IsMember({"norm", "pl", "l", "compare", "verify-paper", "properties"}));
  app.add_option("--command", command, "norm | pl | l | compare | verify-paper | properties")
      ->check(CLI::IsMember({"norm", "pl", "l", "compare", "verify-paper", "properties"}));
  app.add_option("--input", input, "Input document: a path or inline JSON");
  app.add_option("--budget", options.budget, "Search budget (restarts)")->check(CLI::PositiveNumber);
  app.add_option("--seed", options.seed, "Seed for every randomized step");
  app.add_option("--tolerance", options.tolerance, "Assertion tolerance")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--n-max", options.n_max, "Largest n for the V example")->check(CLI::Range(1, 8));
  app.add_option("--trials", options.trials, "Trials per property suite")->check(CLI::PositiveNumber);
  app.add_option("--pairing", pairing, "Pairing of H (x) H with H")->check(CLI::IsMember({"row-major", "column-major"}));
  app.add_option("--case", only_case, "Run only the case with this id");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }
  if (command.empty()) command = positional;
  if (command.empty()) {
    std::cerr << "error: no command given (use --command)\n";
    return kInputError;
  }
  if (!positional.empty() && positional != command) {
    std::cerr << "error: conflicting commands '" << positional << "' and '" << command << "'\n";
    return kInputError;
  }
  options.pairing = pllab::Pairing::from_name(pairing);

  std::string reproduce = "pllab --command " + command;
  if (!input.empty()) reproduce += " --input " + shell_quote(input);
  reproduce += " --budget " + std::to_string(options.budget) + " --seed " + std::to_string(options.seed) +
               " --tolerance " + pllab::format_double(options.tolerance) + " --n-max " +
               std::to_string(options.n_max) + " --trials " + std::to_string(options.trials) + " --pairing " + pairing;

  try {
    std::vector<pllab::Case> cases;
    if (command == "verify-paper") {
      cases = pllab::verify_paper_cases(options);
    } else if (command == "properties") {
      cases = pllab::property_cases(options);
    } else {
      if (input.empty()) throw pllab::InputError("command '" + command + "' needs --input", "");
      cases = pllab::document_cases(command, pllab::parse_document(read_input(input)), options);
    }
    if (!only_case.empty()) {
      std::erase_if(cases, [&](const pllab::Case& c) { return c.id != only_case; });
      if (cases.empty()) throw pllab::InputError("no case with id '" + only_case + "'", "");
    }
    const auto results = pllab::run_cases(cases, pllab::thread_count(std::getenv("PLLAB_THREADS")), reproduce);
    if (format == "csv")
      std::cout << pllab::report_csv(results);
    else
      std::cout << pllab::report_json(command, options, results).dump(2) << '\n';
    return pllab::exit_code(results);
  } catch (const pllab::InputError& e) {
    std::cerr << "input error";
    if (!e.pointer().empty()) std::cerr << " at " << e.pointer();
    std::cerr << ": " << e.what() << '\n';
    return kInputError;
  }
}
