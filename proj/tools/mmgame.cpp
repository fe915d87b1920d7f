#include <chrono>
#include <cmath>
#include <ctime>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mmgame/mmgame.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct Failure {
  int exit_code;
  std::string message;
};

[[noreturn]] void fail_status(mmg_status s) {
  int code = s == MMG_BUDGET ? kExitBudget : s == MMG_INVARIANT ? kExitViolation : kExitUsage;
  throw Failure{code, mmg_last_error()};
}

void check(mmg_status s) {
  if (s != MMG_OK) fail_status(s);
}

[[noreturn]] void usage(const std::string& msg) { throw Failure{kExitUsage, msg}; }

std::string take(char* s) {
  std::string out(s ? s : "");
  mmg_string_free(s);
  return out;
}

std::string fmt(double v) {
  char* s = nullptr;
  check(mmg_format_double(v, &s));
  return take(s);
}

struct Common {
  std::string out;
  bool no_timestamp = false;
  uint64_t memory_budget = 0;
  std::vector<std::string> argv;
};

std::string timestamp() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::vector<std::string> header_lines(const Common& c, const json& config) {
  std::string cmd = "mmgame";
  for (const auto& a : c.argv) cmd += " " + a;
  std::vector<std::string> h{"mmgame " + std::string(mmg_version()), "command: " + cmd, "config: " + config.dump()};
  if (!c.no_timestamp) h.push_back("timestamp: " + timestamp());
  return h;
}

void emit(const Common& c, const std::string& body) {
  if (c.out.empty() || c.out == "-") {
    std::cout << body;
    std::cout.flush();
    return;
  }
  check(mmg_write_file_atomic(c.out.c_str(), body.data(), body.size()));
}

// CSV and text payloads carry the header as '#' lines.
std::string with_comment_header(const Common& c, const json& config, const std::string& body) {
  std::string out;
  for (const auto& l : header_lines(c, config)) out += "# " + l + "\n";
  return out + body;
}

// JSON has no comments, so the header becomes a "config" member.
std::string json_document(const Common& c, const json& config, json doc) {
  json meta{{"version", mmg_version()}, {"config", config}};
  std::string cmd = "mmgame";
  for (const auto& a : c.argv) cmd += " " + a;
  meta["command"] = cmd;
  if (!c.no_timestamp) meta["timestamp"] = timestamp();
  json out{{"run", meta}, {"result", std::move(doc)}};
  return out.dump(2) + "\n";
}

mmg_spec parse_spec(const std::string& family, int n) {
  mmg_spec s{};
  check(mmg_spec_parse(family.c_str(), n, &s));
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

double to_double(const std::string& s) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) usage("not a number: '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    usage("not a number: '" + s + "'");
  }
}

int to_int(const std::string& s) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) usage("not an integer: '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    usage("not an integer: '" + s + "'");
  }
}

// "3", "1,2,5" or "1..20"
std::vector<int> parse_n_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& part : split(s, ',')) {
    auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(to_int(part));
      continue;
    }
    int a = to_int(part.substr(0, dots)), b = to_int(part.substr(dots + 2));
    if (b < a) usage("empty range '" + part + "'");
    for (int k = a; k <= b; ++k) out.push_back(k);
  }
  if (out.empty()) usage("empty n list");
  return out;
}

// "0.5", "0.1,0.2" or "start:stop:step" (inclusive)
std::vector<double> parse_p_grid(const std::string& s) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) {
    auto f = split(part, ':');
    if (f.size() == 1) {
      out.push_back(to_double(f[0]));
    } else if (f.size() == 3) {
      double a = to_double(f[0]), b = to_double(f[1]), st = to_double(f[2]);
      if (!(st > 0) || b < a) usage("bad grid '" + part + "'");
      long k = std::lround((b - a) / st);
      for (long i = 0; i <= k; ++i) out.push_back(i == k ? b : a + double(i) * st);
    } else {
      usage("bad grid '" + part + "'");
    }
  }
  if (out.empty()) usage("empty p grid");
  return out;
}

bool stochastic(const std::string& method) { return method == "mc" || method == "payoff-cdf"; }

std::string csv_row(const std::vector<std::string>& cells) {
  std::string r;
  for (size_t i = 0; i < cells.size(); ++i) r += (i ? "," : "") + cells[i];
  return r + "\n";
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitUsage, "cannot read " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::exception& e) {
    throw Failure{kExitUsage, path + ": " + e.what()};
  }
}

// Writes the witness next to the result and reports the violation.
int report_claim(const Common& c, const json& config, const json& report, const std::string& witness_path) {
  emit(c, json_document(c, config, report));
  if (report.value("status", "") != "violated") return kExitOk;
  std::string doc = json_document(c, config, report);
  check(mmg_write_file_atomic(witness_path.c_str(), doc.data(), doc.size()));
  std::cerr << "invariant violated; witness written to " << witness_path << "\n";
  return kExitViolation;
}

// Even steps act on the width (A halves, a trims one cell), odd steps on the
// height (B halves, b trims one). A zero dimension is sized so that the frame
// at `last` keeps 16 cells along a halving axis and 128 along a trimming one.
void auto_window(const std::string& schedule, int last, uint64_t& width, uint64_t& height) {
  auto grow = [&](bool halving, int steps) {
    uint64_t v = halving ? 16 : 128;
    for (int k = 0; k < steps; ++k) v = halving ? 2 * v : v + 1;
    return v;
  };
  int even = last / 2, odd = (last + 1) / 2;
  if (width == 0) width = grow(schedule[0] == 'A', even);
  if (height == 0) height = grow(schedule[1] == 'B', odd);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimax games on decision trees and lattices"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  for (int i = 1; i < argc; ++i) common.argv.emplace_back(argv[i]);
  app.add_option("--out,-o", common.out, "Output file (default stdout)");
  app.add_flag("--no-timestamp", common.no_timestamp, "Omit the timestamp from output headers");
  app.add_option("--memory-budget", common.memory_budget, "Working-memory ceiling in bytes");

  std::function<int()> action;

  // shared option storage
  std::string family, method = "exact", n_text, p_text, level_text;
  int n = 1;
  double p = 0.5, tol = 1e-4, level = 0.5, eps = 0.25, dp = 0.01;
  uint64_t replicas = 10000, max_replicas = 1u << 22, budget = 10000000, trials = 1000;
  std::optional<uint64_t> seed;

  auto need_seed = [&](const std::string& why) {
    if (!seed) usage("--seed is required for " + why);
    return *seed;
  };

  // exact
  auto* exact = app.add_subcommand("exact", "Exact win probability");
  exact->add_option("--family", family, "AB, Ab, aB, ab (append ' for Bob first)")->required();
  exact->add_option("--n", n, "Rounds")->required();
  exact->add_option("--p", p_text, "Probability or grid")->required();
  exact->add_option("--method", method, "exact, exact-column, recursion, brute-force");
  bool rational = false;
  exact->add_flag("--rational", rational, "Also print the exact rational (at most 16 outcomes)");
  exact->callback([&] {
    action = [&] {
      if (stochastic(method)) usage("exact takes a deterministic method");
      mmg_spec s = parse_spec(family, n);
      std::string body = "family,n,p,method,estimate,ci_low,ci_high,replicas,seed" +
                         std::string(rational ? ",rational" : "") + "\n";
      for (double pv : parse_p_grid(p_text)) {
        mmg_estimate e{};
        check(mmg_win_prob(s, pv, method.c_str(), 0, 0, &e));
        std::vector<std::string> row{family, std::to_string(n), fmt(pv), method, fmt(e.value), fmt(e.ci_low),
                                     fmt(e.ci_high), "0", "0"};
        if (rational) {
          char* r = nullptr;
          check(mmg_win_prob_rational(s, pv, &r));
          row.push_back(take(r));
        }
        body += csv_row(row);
      }
      json cfg{{"command", "exact"}, {"family", family}, {"n", n}, {"p", p_text}, {"method", method}};
      emit(common, with_comment_header(common, cfg, body));
      return kExitOk;
    };
  });

  // mc
  auto* mc = app.add_subcommand("mc", "Monte Carlo win probability");
  mc->add_option("--family", family)->required();
  mc->add_option("--n", n)->required();
  mc->add_option("--p", p_text)->required();
  mc->add_option("--replicas", replicas);
  mc->add_option("--seed", seed);
  std::string mc_method = "mc";
  mc->add_option("--method", mc_method, "mc or payoff-cdf");
  mc->callback([&] {
    action = [&] {
      uint64_t sd = need_seed("mc");
      if (!stochastic(mc_method)) usage("mc takes --method mc or payoff-cdf");
      mmg_spec s = parse_spec(family, n);
      std::string body = "family,n,p,method,estimate,ci_low,ci_high,replicas,seed\n";
      for (double pv : parse_p_grid(p_text)) {
        mmg_estimate e{};
        check(mmg_win_prob(s, pv, mc_method.c_str(), replicas, sd, &e));
        body += csv_row({family, std::to_string(n), fmt(pv), mc_method, fmt(e.value), fmt(e.ci_low), fmt(e.ci_high),
                         std::to_string(e.replicas), std::to_string(e.seed)});
      }
      json cfg{{"command", "mc"}, {"family", family}, {"n", n},   {"p", p_text},
               {"method", mc_method}, {"replicas", replicas}, {"seed", sd}};
      emit(common, with_comment_header(common, cfg, body));
      return kExitOk;
    };
  });

  // sweep
  auto* sw = app.add_subcommand("sweep", "Table of win probabilities over families, n and p");
  std::string families = "Ab";
  sw->add_option("--families", families, "Comma-separated spec names");
  sw->add_option("--n", n_text, "n list, e.g. 1..20 or 4,8")->required();
  sw->add_option("--p", p_text, "p grid, e.g. 0.66:0.76:0.01")->required();
  sw->add_option("--method", method);
  sw->add_option("--replicas", replicas);
  sw->add_option("--seed", seed);
  sw->callback([&] {
    action = [&] {
      uint64_t sd = stochastic(method) ? need_seed("stochastic sweeps") : seed.value_or(0);
      auto ns = parse_n_list(n_text);
      auto ps = parse_p_grid(p_text);
      std::vector<int32_t> ni(ns.begin(), ns.end());
      char* csv = nullptr;
      check(mmg_sweep(families.c_str(), ni.data(), ni.size(), ps.data(), ps.size(), method.c_str(), replicas, sd, &csv));
      json cfg{{"command", "sweep"}, {"families", families}, {"n", n_text},    {"p", p_text},
               {"method", method},   {"replicas", replicas}, {"seed", sd}};
      emit(common, with_comment_header(common, cfg, take(csv)));
      return kExitOk;
    };
  });

  // threshold
  auto* th = app.add_subcommand("threshold", "Bisection for the p where P_n(p) crosses a level");
  th->add_option("--family", family)->required();
  th->add_option("--n", n)->required();
  th->add_option("--level", level);
  th->add_option("--method", method);
  th->add_option("--tol", tol);
  th->add_option("--replicas", replicas);
  th->add_option("--max-replicas", max_replicas);
  th->add_option("--seed", seed);
  th->callback([&] {
    action = [&] {
      uint64_t sd = stochastic(method) ? need_seed("stochastic thresholds") : seed.value_or(0);
      mmg_spec s = parse_spec(family, n);
      char* out = nullptr;
      check(mmg_threshold(s, level, method.c_str(), tol, replicas, max_replicas, sd, &out));
      json cfg{{"command", "threshold"}, {"family", family}, {"n", n},       {"level", level}, {"method", method},
               {"tol", tol},             {"replicas", replicas}, {"seed", sd}};
      emit(common, json_document(common, cfg, json::parse(take(out))));
      return kExitOk;
    };
  });

  // window
  auto* wi = app.add_subcommand("window", "Critical window width between levels eps and 1-eps");
  wi->add_option("--family", family)->required();
  wi->add_option("--n", n_text, "n list")->required();
  wi->add_option("--eps", eps);
  wi->add_option("--method", method);
  wi->add_option("--tol", tol);
  wi->add_option("--replicas", replicas);
  wi->add_option("--seed", seed);
  wi->callback([&] {
    action = [&] {
      uint64_t sd = stochastic(method) ? need_seed("stochastic windows") : seed.value_or(0);
      json rows = json::array();
      for (int nv : parse_n_list(n_text)) {
        char* out = nullptr;
        check(mmg_window(parse_spec(family, nv), eps, method.c_str(), tol, replicas, sd, &out));
        rows.push_back(json::parse(take(out)));
      }
      json cfg{{"command", "window"}, {"family", family}, {"n", n_text}, {"eps", eps},
               {"method", method},    {"tol", tol},       {"seed", sd}};
      emit(common, json_document(common, cfg, rows));
      return kExitOk;
    };
  });

  // influence
  auto* in = app.add_subcommand("influence", "Total influence against dP/dp");
  in->add_option("--family", family)->required();
  in->add_option("--n", n)->required();
  in->add_option("--p", p)->required();
  in->add_option("--replicas", replicas);
  in->add_option("--dp", dp);
  in->add_option("--seed", seed);
  in->callback([&] {
    action = [&] {
      uint64_t sd = need_seed("influence");
      char* out = nullptr;
      check(mmg_influence(parse_spec(family, n), p, replicas, sd, dp, &out));
      json cfg{{"command", "influence"}, {"family", family}, {"n", n},
               {"p", p},                 {"replicas", replicas}, {"dp", dp}, {"seed", sd}};
      emit(common, json_document(common, cfg, json::parse(take(out))));
      return kExitOk;
    };
  });

  // toom
  auto* toom = app.add_subcommand("toom", "Toom cycles");
  toom->require_subcommand(1);
  toom->fallthrough();
  std::string in_path, witness_path = "witness.json";
  auto* tc = toom->add_subcommand("construct", "Cycle from Alice's winning strategy on sampled leaves");
  tc->add_option("--family", family)->required();
  tc->add_option("--n", n)->required();
  tc->add_option("--p", p);
  tc->add_option("--seed", seed);
  bool random_strategy = false;
  tc->add_flag("--random-strategy", random_strategy, "Use a uniformly random Alice strategy instead");
  tc->callback([&] {
    action = [&] {
      uint64_t sd = need_seed("toom construct");
      mmg_spec s = parse_spec(family, n);
      mmg_strategy* st = nullptr;
      json extra;
      if (random_strategy) {
        check(mmg_strategy_random(s, MMG_ALICE, sd, &st));
      } else {
        mmg_leaves* x = nullptr;
        check(mmg_leaves_sample(s, p, sd, &x));
        mmg_status rc = mmg_strategy_extract(x, MMG_ALICE, &st);
        mmg_leaves_free(x);
        if (rc == MMG_NO_STRATEGY) usage("Bob wins on the sampled leaves (L=1); Alice has no winning strategy");
        check(rc);
      }
      mmg_cycle* c = nullptr;
      mmg_status rc = mmg_cycle_construct(st, &c);
      mmg_strategy_free(st);
      check(rc);
      char* cj = nullptr;
      char* census = nullptr;
      rc = mmg_cycle_to_json(c, &cj);
      if (rc == MMG_OK) rc = mmg_cycle_census(c, &census);
      mmg_cycle_free(c);
      check(rc);
      json doc = json::parse(take(cj));
      doc["census"] = json::parse(take(census));
      json cfg{{"command", "toom construct"}, {"family", family}, {"n", n}, {"p", p}, {"seed", sd},
               {"random_strategy", random_strategy}};
      doc["config"] = cfg;
      emit(common, doc.dump(2) + "\n");
      return kExitOk;
    };
  });

  auto* tv = toom->add_subcommand("validate", "Check a cycle file");
  tv->add_option("--in", in_path)->required();
  tv->callback([&] {
    action = [&] {
      json j = read_json_file(in_path);
      std::string text = j.dump();
      mmg_cycle* c = nullptr;
      check(mmg_cycle_from_json(text.c_str(), &c));
      int32_t ok = 0;
      int64_t idx = -1;
      char* reason = nullptr;
      mmg_status rc = mmg_cycle_validate(c, &ok, &idx, &reason);
      mmg_cycle_free(c);
      check(rc);
      std::string why = take(reason);
      emit(common, ok ? std::string("ok\n") : "violation at index " + std::to_string(idx) + ": " + why + "\n");
      return ok ? kExitOk : kExitViolation;
    };
  });

  auto* te = toom->add_subcommand("enumerate", "Count cycles by census m");
  int m_max = 2;
  uint64_t node_budget = uint64_t(1) << 32;
  te->add_option("--family", family)->required();
  te->add_option("--n", n)->required();
  te->add_option("--m-max", m_max);
  te->add_option("--node-budget", node_budget);
  te->callback([&] {
    action = [&] {
      char* out = nullptr;
      check(mmg_toom_enumerate(parse_spec(family, n), m_max, node_budget, &out));
      json cfg{{"command", "toom enumerate"}, {"family", family}, {"n", n}, {"m_max", m_max},
               {"node_budget", node_budget}};
      emit(common, json_document(common, cfg, json::parse(take(out))));
      return kExitOk;
    };
  });

  auto* ts = toom->add_subcommand("search", "Look for a present cycle while Bob wins");
  ts->add_option("--family", family)->required();
  ts->add_option("--n", n)->required();
  ts->add_option("--budget", budget);
  ts->add_option("--seed", seed);
  ts->callback([&] {
    action = [&] {
      uint64_t sd = need_seed("toom search");
      char* out = nullptr;
      check(mmg_toom_false_positive(parse_spec(family, n), budget, sd, &out));
      json cfg{{"command", "toom search"}, {"family", family}, {"n", n}, {"budget", budget}, {"seed", sd}};
      emit(common, json_document(common, cfg, json::parse(take(out))));
      return kExitOk;
    };
  });

  // ca
  auto* ca = app.add_subcommand("ca", "Cellular automata");
  ca->require_subcommand(1);
  ca->fallthrough();
  std::string schedule = "Ab", times_text = "0,1,2,3,4,8,12,24", out_dir = ".", prefix = "frame", format = "pgm";
  uint64_t width = 0, height = 0;
  auto* cs = ca->add_subcommand("snapshot", "Write frames of the real-valued automaton");
  cs->add_option("--schedule", schedule);
  cs->add_option("--times", times_text);
  cs->add_option("--width", width, "Initial window width (0: just enough for the last time)");
  cs->add_option("--height", height, "Initial window height (0: just enough for the last time)");
  cs->add_option("--seed", seed);
  cs->add_option("--out-dir", out_dir);
  cs->add_option("--prefix", prefix);
  cs->add_option("--format", format, "pgm or csv")->check(CLI::IsMember({"pgm", "csv"}));
  cs->callback([&] {
    action = [&] {
      uint64_t sd = need_seed("ca snapshot");
      std::vector<int32_t> times;
      for (int t : parse_n_list(times_text)) times.push_back(t);
      if (schedule.size() < 2) usage("schedule must be one of AB, Ab, aB, ab");
      auto_window(schedule, times.back(), width, height);
      mmg_frames* f = nullptr;
      check(mmg_ca_snapshot(schedule.c_str(), width, height, times.data(), times.size(), sd, &f));
      json cfg{{"command", "ca snapshot"}, {"schedule", schedule}, {"times", times_text}, {"width", width},
               {"height", height},         {"seed", sd},           {"format", format}};
      std::string listing;
      for (uint64_t i = 0; i < mmg_frames_count(f); ++i) {
        int32_t t = 0;
        check(mmg_frame_info(f, i, &t, nullptr, nullptr));
        std::string path = out_dir + "/" + prefix + "_t" + std::to_string(t) + "." + format;
        std::string body;
        json fcfg = cfg;
        fcfg["time"] = t;
        if (format == "pgm") {
          char* bytes = nullptr;
          uint64_t len = 0;
          check(mmg_frame_pgm(f, i, &bytes, &len));
          std::string pgm(bytes, len);
          mmg_string_free(bytes);
          // PGM allows comment lines after the magic number.
          std::string comments;
          for (const auto& l : header_lines(common, fcfg)) comments += "# " + l + "\n";
          body = pgm.substr(0, 3) + comments + pgm.substr(3);
        } else {
          char* csv = nullptr;
          check(mmg_frame_csv(f, i, &csv));
          body = with_comment_header(common, fcfg, take(csv));
        }
        check(mmg_write_file_atomic(path.c_str(), body.data(), body.size()));
        listing += path + "\n";
      }
      mmg_frames_free(f);
      emit(common, with_comment_header(common, cfg, listing));
      return kExitOk;
    };
  });

  auto* cv = ca->add_subcommand("verify", "Automaton origin against the game value");
  cv->add_option("--family", family)->required();
  cv->add_option("--n", n)->required();
  cv->add_option("--p", p);
  cv->add_option("--trials", trials);
  cv->add_option("--seed", seed);
  cv->add_option("--witness", witness_path);
  cv->callback([&] {
    action = [&] {
      uint64_t sd = need_seed("ca verify");
      char* out = nullptr;
      check(mmg_ca_verify(parse_spec(family, n), p, trials, sd, &out));
      json cfg{{"command", "ca verify"}, {"family", family}, {"n", n}, {"p", p}, {"trials", trials}, {"seed", sd}};
      return report_claim(common, cfg, json::parse(take(out)), witness_path);
    };
  });

  // verify
  auto* ve = app.add_subcommand("verify", "Structural claims");
  ve->require_subcommand(1);
  ve->fallthrough();
  auto* vs = ve->add_subcommand("sandwich", "Strategy outcome sets against minimal sets");
  vs->add_option("--family", family)->required();
  vs->add_option("--n", n)->required();
  vs->add_option("--witness", witness_path);
  vs->callback([&] {
    action = [&] {
      char* out = nullptr;
      check(mmg_verify_sandwich(parse_spec(family, n), &out));
      json cfg{{"command", "verify sandwich"}, {"family", family}, {"n", n}};
      return report_claim(common, cfg, json::parse(take(out)), witness_path);
    };
  });

  auto* vp = ve->add_subcommand("projection", "Projections of AB onto Ab and aB");
  vp->add_option("--n", n)->required();
  vp->add_option("--trials", trials);
  vp->add_option("--seed", seed);
  vp->add_option("--witness", witness_path);
  vp->callback([&] {
    action = [&] {
      uint64_t sd = need_seed("verify projection");
      char* out = nullptr;
      check(mmg_verify_projection(n, trials, sd, &out));
      json cfg{{"command", "verify projection"}, {"n", n}, {"trials", trials}, {"seed", sd}};
      return report_claim(common, cfg, json::parse(take(out)), witness_path);
    };
  });

  auto* vc = ve->add_subcommand("compar", "Comparison under a variable identification psi");
  int vars = 0, generators = 4, targets = 2;
  double inclusion = 0.4;
  std::string psi_text;
  bool zero_sets = false;
  vc->add_option("--family", family, "Use the game's outcome function");
  vc->add_option("--n", n);
  vc->add_option("--vars", vars, "Use a random monotone function on this many variables");
  vc->add_option("--generators", generators);
  vc->add_option("--inclusion", inclusion);
  vc->add_option("--psi", psi_text, "Comma-separated targets; random when omitted");
  vc->add_option("--targets", targets);
  vc->add_option("--p", p);
  vc->add_flag("--zero-sets", zero_sets);
  vc->add_option("--seed", seed);
  vc->add_option("--witness", witness_path);
  vc->callback([&] {
    action = [&] {
      uint64_t sd = need_seed("verify compar");
      if (family.empty() == (vars <= 0)) usage("give exactly one of --family or --vars");
      std::vector<int32_t> psi;
      for (const auto& t : split(psi_text, ',')) psi.push_back(to_int(t));
      mmg_spec s{};
      if (!family.empty()) s = parse_spec(family, n);
      char* out = nullptr;
      check(mmg_verify_compar(family.empty() ? nullptr : &s, vars, generators, inclusion, psi.data(), psi.size(),
                              targets, p, zero_sets ? 1 : 0, sd, &out));
      json cfg{{"command", "verify compar"}, {"family", family},         {"n", n},
               {"vars", vars},               {"generators", generators}, {"inclusion", inclusion},
               {"psi", psi_text},            {"targets", targets},       {"p", p},
               {"zero_sets", zero_sets},     {"seed", sd}};
      return report_claim(common, cfg, json::parse(take(out)), witness_path);
    };
  });

  auto* vt = ve->add_subcommand("treeprop", "Outcome sets of AB strategies");
  uint64_t samples = 2000;
  vt->add_option("--n", n)->required();
  vt->add_option("--samples", samples);
  vt->add_option("--seed", seed);
  vt->add_option("--witness", witness_path);
  vt->callback([&] {
    action = [&] {
      uint64_t sd = need_seed("verify treeprop");
      char* out = nullptr;
      check(mmg_verify_treeprop(n, samples, sd, &out));
      json cfg{{"command", "verify treeprop"}, {"n", n}, {"samples", samples}, {"seed", sd}};
      return report_claim(common, cfg, json::parse(take(out)), witness_path);
    };
  });

  auto* vb = ve->add_subcommand("bounds", "Threshold brackets, orderings and ab trends");
  int n_threshold = 20, n_ab = 12, n_order = 2;
  vb->add_option("--n", n_threshold, "n for exact thresholds");
  vb->add_option("--n-ab", n_ab);
  vb->add_option("--n-order", n_order);
  vb->add_option("--replicas", replicas);
  vb->add_option("--seed", seed);
  vb->add_option("--witness", witness_path);
  vb->callback([&] {
    action = [&] {
      uint64_t sd = need_seed("verify bounds");
      char* out = nullptr;
      check(mmg_bounds_report(n_threshold, n_ab, n_order, replicas, sd, &out));
      json report = json::parse(take(out));
      report["status"] = report.value("ok", false) ? "holds" : "violated";
      json cfg{{"command", "verify bounds"}, {"n", n_threshold}, {"n_ab", n_ab},
               {"n_order", n_order},         {"replicas", replicas}, {"seed", sd}};
      return report_claim(common, cfg, report, witness_path);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.exit_code;
  }
  try {
    if (common.memory_budget) check(mmg_set_memory_budget(common.memory_budget));
    return action ? action() : kExitUsage;
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.exit_code;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
