#include "opera_cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "opera/hampoisson.hpp"
#include "opera/oper.hpp"
#include "opera/psdo.hpp"
#include "opera/qchar.hpp"
#include "opera/qlattice.hpp"
#include "opera/verify.hpp"

namespace opera::cli {

namespace {

using Json = nlohmann::ordered_json;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  int n = 2;
  int m = 1;
  int depth = 8;
  int window = 12;
  std::optional<int> order;
  std::string format = "text";
  std::string input;
  std::string q_poly;
  std::string suite = "all";
  bool modified = false;

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["n"] = n;
    j["m"] = m;
    j["depth"] = depth;
    j["window"] = window;
    if (order) j["order"] = *order;
    j["format"] = format;
    if (!input.empty()) j["input"] = input;
    if (!q_poly.empty()) j["q_poly"] = q_poly;
    if (command == "verify") j["suite"] = suite;
    if (modified) j["modified"] = true;
    return j;
  }
};

int default_window() {
  const char* env = std::getenv("OPERA_DEFAULT_WINDOW");
  if (!env) return 12;
  try {
    std::size_t used = 0;
    const int w = std::stoi(env, &used);
    if (used == std::string(env).size() && w > 0) return w;
  } catch (const std::exception&) {
  }
  throw InputError(std::string("OPERA_DEFAULT_WINDOW must be a positive integer, got '") + env + "'");
}

// One "lhs = rhs" line per equation in text/latex, or a JSON document.
struct Equation {
  std::string lhs, rhs;
};

void emit(const RunConfig& cfg, const std::vector<std::string>& notes, const std::vector<Equation>& eqs, std::ostream& out) {
  if (cfg.format == "json") {
    Json j;
    j["command"] = cfg.command;
    j["config"] = cfg.to_json();
    Json arr = Json::array();
    for (const auto& e : eqs) arr.push_back(Json{{"lhs", e.lhs}, {"rhs", e.rhs}});
    j["result"] = arr;
    if (!notes.empty()) j["notes"] = notes;
    out << j.dump(2) << "\n";
    return;
  }
  const bool latex = cfg.format == "latex";
  for (const auto& n : notes) out << (latex ? "% " : "# ") << n << "\n";
  for (const auto& e : eqs) out << e.lhs << " = " << e.rhs << (latex ? " \\\\" : "") << "\n";
}

FieldNames names(const std::string& letter, int nfields, bool latex) {
  FieldNames f = nfields == 1 ? FieldNames::single(letter) : FieldNames::multi(letter);
  if (!latex && nfields > 1) f = FieldNames::grammar(), f.letter = letter;
  return f;
}

std::string render(const JetPolynomial& p, const FieldNames& f, bool latex) { return latex ? p.to_latex(f) : p.to_string(f); }

std::string field_label(const std::string& letter, int i, int nfields, bool latex) {
  if (nfields == 1) return letter;
  return latex ? letter + "_{" + std::to_string(i) + "}" : letter + std::to_string(i);
}

void require_n(const RunConfig& cfg, int lo) {
  if (cfg.n < lo) throw InputError("--n must be at least " + std::to_string(lo));
}

int cmd_flows(const RunConfig& cfg, std::ostream& out) {
  require_n(cfg, 2);
  if (cfg.m % cfg.n == 0) throw InputError("--m must not be divisible by --n");
  const bool latex = cfg.format == "latex";
  const int k = cfg.n - 1;
  std::vector<Equation> eqs;
  std::vector<std::string> notes;
  const std::string letter = cfg.modified ? "u" : "v";
  const FieldNames f = names(letter, k, latex);
  std::vector<JetPolynomial> rhs;
  try {
    rhs = cfg.modified ? mkdv_flow(cfg.n, cfg.m, cfg.depth) : lax_rhs(cfg.n, cfg.m, cfg.depth).rhs;
  } catch (const DepthExhausted& e) {
    throw InputError(std::string("depth too small: ") + e.what() + " (increase --depth)");
  }
  if (cfg.modified && k > 1) notes.push_back("fields u1..u" + std::to_string(k) + " are the Miura components u_2..u_n; u_1 = -(u_2 + ... + u_n)");
  if (!cfg.modified) notes.push_back("L = d^" + std::to_string(cfg.n) + " - sum_i v_i d^(n-1-i)");
  for (int i = 1; i <= k; ++i) {
    const std::string lab = field_label(letter, i, k, latex);
    const std::string lhs = latex ? "\\partial_{t_{" + std::to_string(cfg.m) + "}} " + lab : "d" + lab + "/dt" + std::to_string(cfg.m);
    eqs.push_back({lhs, render(rhs[i - 1], f, latex)});
  }
  emit(cfg, notes, eqs, out);
  return kExitOk;
}

int cmd_miura(const RunConfig& cfg, std::ostream& out) {
  require_n(cfg, 2);
  const bool latex = cfg.format == "latex";
  const int k = cfg.n - 1;
  std::vector<JetPolynomial> v = miura_expand(miura_diagonal(cfg.n));
  std::vector<std::string> notes;
  if (k > 1) notes.push_back("fields u1..u" + std::to_string(k) + " are u_2..u_n; u_1 = -(u_2 + ... + u_n)");
  notes.push_back("(d + u_1)...(d + u_n) = d^n - sum_i v_i d^(n-1-i)");
  std::vector<Equation> eqs;
  for (int i = 1; i <= k; ++i) eqs.push_back({field_label("v", i, k, latex), render(v[i - 1], names("u", k, latex), latex)});
  emit(cfg, notes, eqs, out);
  return kExitOk;
}

MatrixOper read_matrix_oper(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("entries") || !j["n"].is_number_integer() || !j["entries"].is_array())
    throw InputError(path + ": expected {\"n\": int, \"entries\": [[expr]]}");
  const int n = j["n"].get<int>();
  const Json& rows = j["entries"];
  if (n < 2 || static_cast<int>(rows.size()) != n) throw InputError(path + ": entries must be an n x n array with n >= 2");
  JetMatrix a;
  for (int r = 0; r < n; ++r) {
    if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != n) throw InputError(path + ": row " + std::to_string(r + 1) + " must have n entries");
    a.emplace_back();
    for (int c = 0; c < n; ++c) {
      const Json& e = rows[r][c];
      std::string text = e.is_string() ? e.get<std::string>() : e.is_number() ? e.dump() : "";
      if (text.empty()) throw InputError(path + ": entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ") must be an expression string");
      try {
        a.back().push_back(parse_jet(text));
      } catch (const ParseError& pe) {
        throw InputError(path + ": entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ") line " + std::to_string(pe.line()) + ", column " +
                         std::to_string(pe.column()) + ": " + pe.message());
      }
    }
  }
  try {
    return MatrixOper(a);
  } catch (const ShapeError& e) {
    throw InputError(path + ": " + e.what());
  }
}

int cmd_canonicalize(const RunConfig& cfg, std::ostream& out) {
  if (cfg.input.empty()) throw InputError("canonicalize needs --input");
  const MatrixOper m = read_matrix_oper(cfg.input);
  const Canonicalization c = canonicalize(m);
  const bool latex = cfg.format == "latex";
  const int k = m.size() - 1;
  const FieldNames f = latex ? FieldNames::multi("u") : FieldNames::grammar();
  if (cfg.format == "json") {
    Json j;
    j["command"] = cfg.command;
    j["config"] = cfg.to_json();
    Json v = Json::array();
    for (const auto& p : c.oper.v) v.push_back(p.to_string(f));
    j["result"] = Json{{"v", v}};
    Json g = Json::array();
    for (const auto& row : c.gauge) {
      Json r = Json::array();
      for (const auto& e : row) r.push_back(e.to_string(f));
      g.push_back(r);
    }
    j["result"]["gauge"] = g;
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  std::vector<Equation> eqs;
  for (int i = 1; i <= k; ++i) eqs.push_back({field_label("v", i, k, latex), render(c.oper.v[i - 1], f, latex)});
  emit(cfg, {"canonical form d^n - sum_i v_i d^(n-1-i) of a size-" + std::to_string(m.size()) + " oper"}, eqs, out);
  return kExitOk;
}

int cmd_qmiura(const RunConfig& cfg, std::ostream& out) {
  require_n(cfg, 2);
  const bool latex = cfg.format == "latex";
  QMiura qm = q_miura_expand(cfg.n);
  std::vector<Equation> eqs;
  const SymbolStyle raw{latex, false};
  for (int i = 1; i < cfg.n; ++i) {
    const std::string lab = cfg.n == 2 ? "t(z)" : (latex ? "t_{" + std::to_string(i) + "}(z)" : "t" + std::to_string(i) + "(z)");
    const SymbolPoly t = cfg.n == 2 ? impose_product_constraint(qm.t[i - 1], 2) : qm.t[i - 1];
    eqs.push_back({lab, t.to_string(cfg.n == 2 ? SymbolStyle{latex, true} : raw)});
  }
  eqs.push_back({latex ? "\\prod_i \\Lambda_i(z)" : "prod_i Lambda_i(z)", qm.constant.to_string(raw)});
  emit(cfg, {"(D + Lambda_1(z))...(D + Lambda_n(z)), (D g)(z) = g(zq^2), prod Lambda_i = 1"}, eqs, out);
  return kExitOk;
}

int cmd_limit(const RunConfig& cfg, std::ostream& out) {
  const int order = cfg.order.value_or(3);
  if (order < 3) throw InputError("--order must be at least 3");
  const bool latex = cfg.format == "latex";
  TruncatedSeries<JetPolynomial> t = classical_limit(order);
  std::vector<Equation> eqs;
  for (int k = 0; k < order; ++k)
    eqs.push_back({latex ? "[h^{" + std::to_string(k) + "}]\\, t(z)" : "[h^" + std::to_string(k) + "] t(z)",
                   render(t.coeff(k), FieldNames::single("u"), latex)});
  emit(cfg, {"q = e^h, Lambda(z) = exp(2h u(z) z)", kClassicalLimitNote}, eqs, out);
  return kExitOk;
}

ParamRational parse_laurent_z(const std::string& text) {
  JetPolynomial p;
  try {
    p = parse_jet(text);
  } catch (const ParseError& e) {
    throw InputError("--q-poly: column " + std::to_string(e.column()) + ": " + e.message());
  }
  ParamRational r;
  const ParamRational z = ParamRational::variable(Var::z);
  for (const auto& [m, c] : p.terms()) {
    if (!m.factors().empty()) throw InputError("--q-poly must not contain fields");
    r = r + c * z.pow(m.z());
  }
  if (r.is_zero()) throw InputError("--q-poly must be nonzero");
  return r;
}

int cmd_baxter(const RunConfig& cfg, std::ostream& out) {
  if (cfg.q_poly.empty()) throw InputError("baxter needs --q-poly");
  const ParamRational Q = parse_laurent_z(cfg.q_poly);
  const BaxterResult r = baxter_substitute(Q);
  const bool latex = cfg.format == "latex";
  auto s = [&](const ParamRational& x) { return latex ? x.to_latex() : x.to_string(); };
  emit(cfg, {"Lambda(z) = Q(zq^-2)/Q(z), t(z) = Lambda(z) + Lambda(zq^2)^-1"},
       {{"Q(z)", s(Q)}, {latex ? "\\Lambda(z)" : "Lambda(z)", s(r.lambda)}, {"t(z)", s(r.t)}}, out);
  return kExitOk;
}

int cmd_qchar(const RunConfig& cfg, std::ostream& out) {
  require_n(cfg, 2);
  const bool latex = cfg.format == "latex";
  YPolynomial chi = qchar_fundamental(cfg.n);
  emit(cfg, {"Lambda_i(za) -> Y_{i,aq^(-i+1)} Y_{i-1,aq^(-i+2)}^-1, Y_0 = Y_n = 1"},
       {{latex ? "\\chi_q(V_{\\omega_1}(a))" : "chi_q(V(a))", chi.to_string(latex)},
        {latex ? "\\chi(V_{\\omega_1})" : "chi(V)", forgetful(chi, cfg.n).to_string(latex)}},
       out);
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const auto& known = suite_names();
  if (std::find(known.begin(), known.end(), cfg.suite) == known.end()) throw InputError("unknown suite '" + cfg.suite + "'");
  VerifyConfig vc;
  vc.window = cfg.window;
  vc.depth = cfg.depth;
  vc.order = cfg.order.value_or(20);
  const SuiteReport r = run_suite(cfg.suite, vc);
  const int status = r.passed() ? kExitOk : kExitFailed;
  if (cfg.format == "json") {
    Json j;
    j["suite"] = r.suite;
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back(Json{{"id", c.id}, {"status", c.passed ? "pass" : "fail"}, {"detail", c.detail}});
    j["checks"] = checks;
    j["config"] = cfg.to_json();
    j["exit_status"] = status;
    out << j.dump(2) << "\n";
    return status;
  }
  const bool latex = cfg.format == "latex";
  int passed = 0;
  out << (latex ? "% " : "") << "suite: " << r.suite << "\n";
  for (const auto& c : r.checks) {
    passed += c.passed;
    out << (latex ? "% " : "") << (c.passed ? "PASS " : "FAIL ") << c.id;
    if (!c.detail.empty()) out << "  " << c.detail;
    out << "\n";
  }
  out << (latex ? "% " : "") << "result: " << (r.passed() ? "pass" : "fail") << " (" << passed << "/" << r.checks.size() << " checks)\n";
  return status;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Opers, Miura maps, q-deformations and their verification suites", "opera"};
  app.require_subcommand(1);
  RunConfig cfg;
  try {
    cfg.window = default_window();
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  auto common = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "algebra size n (sl_n)")->check(CLI::PositiveNumber);
    sub->add_option("--m", cfg.m, "flow index m")->check(CLI::PositiveNumber);
    sub->add_option("--depth", cfg.depth, "truncation depth of pseudodifferential roots")->check(CLI::PositiveNumber);
    sub->add_option("--window", cfg.window, "mode window W (default 12 or OPERA_DEFAULT_WINDOW)")->check(CLI::PositiveNumber);
    sub->add_option("--order", cfg.order, "series order")->check(CLI::PositiveNumber);
    sub->add_option("--format", cfg.format, "text, latex or json")->check(CLI::IsMember({"text", "latex", "json"}));
  };
  struct Command {
    const char* name;
    const char* help;
    int (*fn)(const RunConfig&, std::ostream&);
  };
  const std::vector<Command> commands = {
      {"flows", "Lax flows of the sl_n KdV hierarchy (--modified: mKdV)", cmd_flows},
      {"miura", "Miura polynomials v_i(u)", cmd_miura},
      {"canonicalize", "canonical form of a MatrixOper JSON file", cmd_canonicalize},
      {"qmiura", "q-Miura factorization", cmd_qmiura},
      {"limit", "classical limit q = e^h of t(z)", cmd_limit},
      {"baxter", "Baxter substitution for a Laurent polynomial Q(z)", cmd_baxter},
      {"qchar", "q-character of the first fundamental module", cmd_qchar},
      {"verify", "run verification suites", cmd_verify},
  };
  std::map<CLI::App*, const Command*> by_app;
  for (const auto& s : commands) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    common(sub);
    if (std::string(s.name) == "flows") sub->add_flag("--modified", cfg.modified, "emit the mKdV flows in Miura variables");
    if (std::string(s.name) == "canonicalize") sub->add_option("--input", cfg.input, "MatrixOper JSON file {\"n\": int, \"entries\": [[expr]]}");
    if (std::string(s.name) == "baxter") sub->add_option("--q-poly", cfg.q_poly, "Laurent polynomial in z, e.g. \"1 - z\"");
    if (std::string(s.name) == "verify") sub->add_option("--suite", cfg.suite, "poisson, lax, oper, qbracket, qlimit, wqt, qchar, wakimoto or all");
    by_app[sub] = &s;
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  const Command* command = nullptr;
  for (const auto& [sub, s] : by_app)
    if (sub->parsed()) command = s;
  cfg.command = command->name;
  std::ostringstream buffer;
  try {
    const int status = command->fn(cfg, buffer);
    out << buffer.str();
    return status;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  } catch (const ParseError& e) {
    err << "error: line " << e.line() << ", column " << e.column() << ": " << e.message() << "\n";
  }
  return kExitInput;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace opera::cli
