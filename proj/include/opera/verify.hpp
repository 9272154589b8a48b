#pragma once

// Verification suites: each group runs exact identities at desk scale and
// returns one entry per check. Shared by the command-line driver and the
// acceptance runner.

#include <string>
#include <vector>

namespace opera {

struct Check {
  std::string id;
  bool passed = true;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  bool passed() const;
};

struct VerifyConfig {
  int window = 12;
  int depth = 8;
  int order = 20;
  unsigned seed = 2718;
};

std::vector<Check> check_miura_sl2();
std::vector<Check> check_poisson(int window);
std::vector<Check> check_lax(int depth);
std::vector<Check> check_canonicalization(int trials, unsigned seed);
std::vector<Check> check_coordinate_laws(int cocycle_order = 10, int equivariance_order = 8);
std::vector<Check> check_qmiura();
std::vector<Check> check_qbracket(int window);
std::vector<Check> check_classical_limit();
std::vector<Check> check_structure_function(int order, int window);
std::vector<Check> check_qchar();
std::vector<Check> check_wakimoto(int window, int degree);
std::vector<Check> check_gelfand_dickey(int pairs, unsigned seed);

// poisson, lax, oper, qbracket, qlimit, wqt, qchar, wakimoto, all.
const std::vector<std::string>& suite_names();
// Throws std::invalid_argument for an unknown suite.
SuiteReport run_suite(const std::string& name, const VerifyConfig& config);

// Printed with the classical-limit results.
extern const char* const kClassicalLimitNote;

}  // namespace opera
