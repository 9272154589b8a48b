#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "opera_cli.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = opera::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("flows") {
  Result r = run({"flows", "--n", "2", "--m", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("dv/dt1 = v'\n") != std::string::npos);
  Result l = run({"flows", "--n", "2", "--m", "3", "--format", "latex"});
  CHECK(l.code == 0);
  CHECK(l.out.find("\\partial_{t_{3}} v = -\\frac{3}{2} v v' + \\frac{1}{4} v''' \\\\") != std::string::npos);
  int equations = 0;
  for (std::size_t p = l.out.find("\\partial"); p != std::string::npos; p = l.out.find("\\partial", p + 1)) ++equations;
  CHECK(equations == 1);
  CHECK(run({"flows", "--n", "2", "--m", "2"}).code == 2);
  CHECK(run({"flows", "--n", "2", "--m", "7", "--depth", "3"}).code == 2);
  CHECK(run({"flows", "--n", "0"}).code == 2);
  CHECK(run({"flows", "--format", "xml"}).code == 2);
  Result mk = run({"flows", "--m", "3", "--modified"});
  CHECK(mk.out.find("du/dt3 = -9/4*u^2*u' + 3/8*u'''") != std::string::npos);
  // Identical configuration, identical bytes.
  CHECK(run({"flows", "--n", "3", "--m", "2", "--format", "json"}).out == run({"flows", "--n", "3", "--m", "2", "--format", "json"}).out);
}

TEST_CASE("miura, qmiura, limit, baxter, qchar") {
  CHECK(run({"miura"}).out.find("v = u^2 - u'") != std::string::npos);
  CHECK(run({"qmiura"}).out.find("t(z) = Lambda(z) + Lambda(z*q^2)^-1") != std::string::npos);
  Result lim = run({"limit"});
  CHECK(lim.out.find("[h^0] t(z) = 2") != std::string::npos);
  CHECK(lim.out.find("4h^2 v(z) z^2") != std::string::npos);
  Result b = run({"baxter", "--q-poly", "1 - z"});
  CHECK(b.code == 0);
  CHECK(b.out.find("Q(z) = -z + 1") != std::string::npos);
  CHECK(run({"baxter", "--q-poly", "1 - u"}).code == 2);
  CHECK(run({"baxter"}).code == 2);
  Result q = run({"qchar", "--n", "2"});
  CHECK(q.out.find("chi_q(V(a)) = Y_{1,a} + Y_{1,aq^2}^-1") != std::string::npos);
  CHECK(q.out.find("chi(V) = y^-1 + y") != std::string::npos);
}

TEST_CASE("canonicalize from JSON") {
  std::string ok = write_temp("opera_sl2.json", R"({"n": 2, "entries": [["u", "0"], ["-1", "-u"]]})");
  Result r = run({"canonicalize", "--input", ok});
  CHECK(r.code == 0);
  CHECK(r.out.find("v = u1_0^2 + u1_1") != std::string::npos);
  nlohmann::json j = nlohmann::json::parse(run({"canonicalize", "--input", ok, "--format", "json"}).out);
  CHECK(j["result"]["v"].size() == 1);
  std::string bad = write_temp("opera_bad.json", R"({"n": 2, "entries": [["u1_+", "0"], ["-1", "-u"]]})");
  Result e = run({"canonicalize", "--input", bad});
  CHECK(e.code == 2);
  CHECK(e.err.find("column 4") != std::string::npos);
  CHECK(run({"canonicalize", "--input", write_temp("opera_shape.json", R"({"n": 2, "entries": [["u", "0"], ["1", "-u"]]})")}).code == 2);
  CHECK(run({"canonicalize", "--input", write_temp("opera_broken.json", "{\"n\": 2,")}).code == 2);
  CHECK(run({"canonicalize", "--input", "/nonexistent/file.json"}).code == 2);
}

TEST_CASE("verify reports") {
  Result p = run({"verify", "--suite", "poisson", "--window", "8"});
  CHECK(p.code == 0);
  CHECK(p.out.find("result: pass") != std::string::npos);
  Result q = run({"verify", "--suite", "qbracket", "--window", "12", "--format", "json"});
  CHECK(q.code == 0);
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(q.out);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"suite", "checks", "config", "exit_status"});
  CHECK(j["suite"] == "qbracket");
  for (const auto& c : j["checks"]) CHECK(c["status"] == "pass");
  CHECK(run({"verify", "--suite", "nosuch"}).code == 2);
}

TEST_CASE("default window from the environment") {
  setenv("OPERA_DEFAULT_WINDOW", "5", 1);
  nlohmann::json j = nlohmann::json::parse(run({"verify", "--suite", "qchar", "--format", "json"}).out);
  CHECK(j["config"]["window"] == 5);
  setenv("OPERA_DEFAULT_WINDOW", "abc", 1);
  CHECK(run({"verify", "--suite", "qchar"}).code == 2);
  unsetenv("OPERA_DEFAULT_WINDOW");
  CHECK(run({"--help"}).code == 0);
}
