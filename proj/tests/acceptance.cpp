// Acceptance harness: one pass/fail line per criterion at pinned sample
// counts, seeds and tolerances. `acceptance <criterion>` runs one line,
// no argument runs all of them. Exit status is nonzero on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ellid/catalog.hpp"
#include "ellid/runner.hpp"

using namespace ellid;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Tally {
  long passed = 0;
  long total = 0;
  double max_rel = 0;
  double max_seconds = 0;
  std::vector<std::string> notes;

  void add(const IdentityResult& r) {
    ++total;
    if (r.status == Status::pass) ++passed;
    if (r.kind == EntryKind::numeric && std::isfinite(r.rel_error)) max_rel = std::max(max_rel, r.rel_error);
    max_seconds = std::max(max_seconds, r.seconds);
    if (r.status != Status::pass && notes.size() < 3) {
      std::ostringstream os;
      os << r.id;
      if (r.kind == EntryKind::numeric) os << "[" << r.index << "] rel=" << r.rel_error;
      if (!r.message.empty()) os << " " << r.message;
      notes.push_back(os.str());
    }
  }
  void add(const VerificationReport& rep) {
    for (const auto& r : rep.results) add(r);
  }
  bool ok() const { return total > 0 && passed == total; }
};

struct Outcome {
  bool pass;
  std::string detail;
};

VerificationReport suite(const std::vector<std::string>& ids, long samples, std::optional<long> order = {}) {
  RunConfig c;
  c.ids = ids;
  c.samples = samples;
  c.seed = kSeed;
  c.series_order = order;
  return run_suite(c);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::string summary(const Tally& t, const std::string& what) {
  std::string s = std::to_string(t.passed) + "/" + std::to_string(t.total) + " " + what;
  for (const auto& n : t.notes) s += "; " + n;
  return s;
}

Outcome numeric(const std::vector<std::string>& ids, long samples, const std::string& tol) {
  Tally t;
  t.add(suite(ids, samples));
  return {t.ok(), summary(t, "within " + tol + " (max rel " + fmt(t.max_rel) + ")")};
}

Outcome spiridonov() {
  Tally t;
  t.add(suite({"spiridonov"}, 20));
  const bool fast = t.max_seconds <= 2.0;
  return {t.ok() && fast, summary(t, "within 1e-8 (max rel " + fmt(t.max_rel) + ", slowest integral " +
                                         fmt(t.max_seconds) + " s, limit 2 s)")};
}

Outcome second_kind() {
  Tally main;
  main.add(suite({"eval3"}, 30));
  Tally zero;
  std::set<long> points;
  const VerificationReport z = suite({"eval3.zero"}, 30);
  for (const auto& r : z.results) {
    zero.add(r);
    points.insert(r.params.integer("point"));
  }
  const bool covered = points.size() == 3;
  return {main.ok() && zero.ok() && covered,
          summary(main, "closed-form draws within 1e-8 (max rel " + fmt(main.max_rel) + ")") + ", " +
              summary(zero, "zero checks at lambda in {0, +-2 eta} at quadrature tolerance") +
              (covered ? "" : ", zero points not all covered")};
}

Outcome macdonald_eval() {
  const IdentityEntry& e = find_identity("ellmac-eval");
  Tally t;
  for (long kappa : {4, 5, 6, 8}) {
    for (long mu : {0, 1, 2}) {
      const long m = mod_floor(mu + 2, kappa);
      if (m == 1 || m == kappa - 1) continue;
      SampleRng r(kSeed, "acceptance.macdonald-eval", static_cast<std::uint64_t>(kappa * 10 + mu));
      for (int i = 0; i < 2; ++i) {
        ParamSet ps;
        ps.set("mu", static_cast<double>(mu));
        ps.set("kappa", static_cast<double>(kappa));
        ps.set("eta", {r.uniform(-0.05, 0.05), r.uniform(-0.3, -0.1)});
        IdentityResult res = check_params(e, ps, e.tolerance);
        res.index = kappa * 100 + mu * 10 + i;
        t.add(res);
      }
    }
  }
  return {t.ok(), summary(t, "grid points over kappa in {4,5,6,8}, mu in {0,1,2} within 1e-8 (max rel " +
                                 fmt(t.max_rel) + ")")};
}

Outcome modular() {
  Tally minus, plus;
  minus.add(suite({"ellmac-mod-minus"}, 5));
  plus.add(suite({"ellmac-mod-plus"}, 5));
  return {minus.ok() && plus.ok(), summary(minus, "minus within 1e-6 (max rel " + fmt(minus.max_rel) + ")") + ", " +
                                       summary(plus, "plus within 1e-6 (max rel " + fmt(plus.max_rel) + ")")};
}

Outcome lemmas() {
  Tally num, ser;
  num.add(suite({"lemma.sym-rearrange", "lemma.int-rearrange", "lemma.theta-simp", "lemma.full-sym",
                 "lemma.theta-simp2", "lemma.theta-simp3", "lemma.theta-simp4", "lemma.int-eval1",
                 "lemma.int-eval2"},
                20));
  ser.add(suite({"series.theta-simp2", "series.theta-simp3", "series.theta-simp4", "series.sym-rearrange"}, 1, 8));
  return {num.ok() && ser.ok(), summary(num, "lemma draws within 1e-8 (max rel " + fmt(num.max_rel) + ")") + ", " +
                                    summary(ser, "exact series lemmas to order 8")};
}

Outcome series_exact() {
  Tally t;
  t.add(suite({"series.triple-product"}, 1, 12));
  t.add(suite({"series.denominator"}, 1, 6));
  t.add(suite({"series.aff-eval"}, 1, 40));
  t.add(suite({"series.hall-limit"}, 1, 8));
  return {t.ok(), summary(t, "exact comparisons (triple product 12, denominator 6, evaluation 40, Hall limit 8)")};
}

Outcome bridge() {
  Tally j;
  j.add(suite({"bridge.j002"}, 10));
  const IdentityEntry& e = find_identity("bridge.eval-conj");
  Tally ev;
  long idx = 0;
  for (auto [mu, k] : {std::pair{1L, 1L}, std::pair{2L, 0L}, std::pair{0L, 2L}}) {
    ParamSet ps;
    ps.set("mu", static_cast<double>(mu));
    ps.set("k", static_cast<double>(k));
    ps.set("q", 1.4);
    IdentityResult r = check_params(e, ps, e.tolerance);
    r.index = idx++;
    ev.add(r);
  }
  std::vector<std::string> all;
  for (const auto& x : registry()) all.push_back(x.id);
  const auto t0 = std::chrono::steady_clock::now();
  const VerificationReport full = suite(all, 20);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs <= 600;
  return {j.ok() && ev.ok() && in_time,
          summary(j, "J_{0,0,2} = 1 draws within 1e-6 (max rel " + fmt(j.max_rel) + ")") + ", " +
              summary(ev, "evaluation pairs within 1e-6 (max rel " + fmt(ev.max_rel) + ")") + ", full suite " +
              std::to_string(full.results.size()) + " checks in " + fmt(secs) + " s single-threaded (limit 600 s)"};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Outcome()>>> c{
      {"spiridonov", spiridonov},
      {"first-kind", [] { return numeric({"eval1", "eval2"}, 20, "1e-8"); }},
      {"second-kind", second_kind},
      {"felder-varchenko", [] { return numeric({"fv-val1", "fv-val2"}, 20, "1e-8"); }},
      {"macdonald-value", [] { return numeric({"ellmac-val", "ellmac-val.lambda"}, 10, "1e-8"); }},
      {"macdonald-eval", macdonald_eval},
      {"delta-series", [] { return numeric({"delta-series"}, 5, "1e-6"); }},
      {"modular", modular},
      {"lemmas", lemmas},
      {"series-exact", series_exact},
      {"bridge", bridge},
  };
  return c;
}

bool run(const std::string& name, const std::function<Outcome()>& f) {
  Outcome o;
  try {
    o = f();
  } catch (const std::exception& ex) {
    o = {false, std::string("error: ") + ex.what()};
  }
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << "  " << o.detail << std::endl;
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 2) {
    std::cerr << "usage: acceptance [criterion]\n";
    return 2;
  }
  if (argc == 2) {
    const std::string want = argv[1];
    for (const auto& [name, f] : criteria())
      if (name == want) return run(name, f) ? 0 : 1;
    std::cerr << "unknown criterion " << want << "; known:";
    for (const auto& [name, f] : criteria()) std::cerr << ' ' << name;
    std::cerr << '\n';
    return 2;
  }
  bool all = true;
  for (const auto& [name, f] : criteria()) all = run(name, f) && all;
  return all ? 0 : 1;
}
