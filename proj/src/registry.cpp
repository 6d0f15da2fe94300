#include "ellid/registry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ellid/bridge.hpp"
#include "ellid/catalog.hpp"
#include "ellid/qseries.hpp"

namespace ellid {

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::uint64_t splitmix(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SampleRng::SampleRng(std::uint64_t seed, const std::string& id, std::uint64_t index) {
  std::uint64_t s = seed;
  const std::uint64_t a = splitmix(s);
  std::uint64_t t = a ^ fnv1a64(id);
  const std::uint64_t b = splitmix(t);
  std::uint64_t u = b ^ (index * 0xd1b54a32d192ed03ULL);
  state_ = splitmix(u);
}

std::uint64_t SampleRng::next() { return splitmix(state_); }

double SampleRng::uniform(double lo, double hi) {
  const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

long SampleRng::integer(long lo, long hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<long>(next() % span);
}

void ParamSet::set(const std::string& name, std::complex<double> v) {
  for (auto& p : values) {
    if (p.name == name) {
      p.value = v;
      return;
    }
  }
  values.push_back({name, v});
}

std::complex<double> ParamSet::get(const std::string& name) const {
  for (const auto& p : values)
    if (p.name == name) return p.value;
  throw ConfigInvalid("missing parameter " + name);
}

long ParamSet::integer(const std::string& name) const { return std::lround(get(name).real()); }

bool ParamSet::has(const std::string& name) const {
  return std::any_of(values.begin(), values.end(), [&](const Param& p) { return p.name == name; });
}

namespace {

using C = std::complex<double>;

template <class R>
cplx<R> arg(const ParamSet& ps, const char* name) {
  return cast<R>(ps.get(name));
}

C to_c(const cplx<double>& z) { return z; }
C to_c(const cplx<long double>& z) { return cast<double>(z); }

template <class R>
Evaluation make_eval(const cplx<R>& lhs, const cplx<R>& rhs, R quad_error = 0) {
  return {to_c(lhs), to_c(rhs), static_cast<double>(quad_error), std::nullopt};
}

template <class F>
std::function<Evaluation(const ParamSet&, Precision)> dispatch(F f) {
  return [f](const ParamSet& ps, Precision p) -> Evaluation {
    if (p == Precision::extended) return f(static_cast<long double>(0), ps);
    return f(0.0, ps);
  };
}

template <class R>
std::vector<PoleRecord> records(const std::vector<PoleLattice<R>>& lattices) {
  std::vector<PoleRecord> out;
  for (const auto& d : declared_poles(lattices)) out.push_back({to_c(d.point), d.required});
  return out;
}

C upper(SampleRng& r, double re_lo, double re_hi, double im_lo, double im_hi) {
  const double re = r.uniform(re_lo, re_hi);
  return {re, r.uniform(im_lo, im_hi)};
}

// True when (4 - 8M) eta - N tau comes within 0.1 of an integer for some M, N >= 0.
bool asym_pinched(C tau, C eta) {
  for (int M = 0; M <= 8; ++M) {
    for (int N = 0; N <= 400; ++N) {
      const C z = static_cast<double>(4 - 8 * M) * eta - static_cast<double>(N) * tau;
      if (std::abs(z.imag()) < 0.1 && std::abs(z - std::round(z.real())) < 0.1) return true;
    }
  }
  return false;
}

// True when 4 eta + N tau comes within 0.1 of an integer.
bool htf_pinched(C tau, C eta) {
  for (int N = 0; N <= 400; ++N) {
    const C z = 4.0 * eta + static_cast<double>(N) * tau;
    if (std::abs(z.imag()) < 0.1 && std::abs(z - std::round(z.real())) < 0.1) return true;
  }
  return false;
}

bool near_theta_zero(C lambda, C tau, C eta) {
  for (C z : {lambda, lambda - 2.0 * eta, lambda + 2.0 * eta})
    if (lattice_distance<double>(z, tau) < 0.05) return true;
  return false;
}

bool separable(const std::vector<PoleLattice<double>>& lattices) {
  try {
    separating_contour(lattices);
    return true;
  } catch (const Error&) {
    return false;
  }
}

void sample_asym(SampleRng& r, ParamSet& ps) {
  C tau, eta;
  do {
    tau = upper(r, -0.3, 0.3, 0.2, 0.8);
    eta = upper(r, -0.1, 0.1, 0.2, 0.8);
  } while (asym_pinched(tau, eta) || !separable(asym_lattices(tau, eta)));
  ps.set("tau", tau);
  ps.set("eta", eta);
}

C sample_point(SampleRng& r) { return upper(r, -0.5, 0.5, -0.2, 0.2); }

void sample_pair(SampleRng& r, ParamSet& ps, const char* a, const char* b) {
  ps.set(a, upper(r, -0.3, 0.3, 0.5, 1.2));
  ps.set(b, upper(r, -0.3, 0.3, 0.5, 1.2));
}

// tau, eta and lambda for the elliptic Macdonald polynomial at kappa = 4.
void sample_htf(SampleRng& r, ParamSet& ps, double eta_lo, double eta_hi, double tau_lo, double tau_hi,
                std::initializer_list<const char*> lambdas) {
  C tau, eta;
  do {
    eta = upper(r, -0.05, 0.05, eta_lo, eta_hi);
    tau = upper(r, -0.3, 0.3, tau_lo, tau_hi);
  } while (htf_pinched(tau, eta) || !separable(fv_lattices(tau, -8.0 * eta, eta)));
  ps.set("tau", tau);
  ps.set("eta", eta);
  for (const char* name : lambdas) {
    C lambda;
    do {
      lambda = upper(r, -0.4, 0.4, -0.1, 0.1);
    } while (near_theta_zero(lambda, tau, eta));
    ps.set(name, lambda);
  }
}

template <class R>
std::vector<PoleLattice<R>> htf_lattices(const ParamSet& ps, long kappa) {
  const cplx<R> tau = arg<R>(ps, "tau");
  const cplx<R> eta = arg<R>(ps, "eta");
  return fv_lattices(tau, R(-2) * eta * static_cast<R>(kappa), eta);
}

std::vector<PoleRecord> no_poles(const ParamSet&) { return {}; }

// ---------------------------------------------------------------- numeric entries

void add_integrals(std::vector<IdentityEntry>& out) {
  out.push_back({"spiridonov", "Spiridonov elliptic beta integral",
                 "Im tau, Im sigma in [0.5, 1.2]; s_1..s_5 in the upper half plane, s_6 fixed by balancing",
                 EntryKind::numeric, 1e-8, 0,
                 [](SampleRng& r) {
                   ParamSet ps;
                   sample_pair(r, ps, "tau", "sigma");
                   const C ts = ps.get("tau") + ps.get("sigma");
                   C sum = 0;
                   for (int i = 1; i <= 5; ++i) {
                     const C s(r.uniform(-0.2, 0.2), r.uniform(0.6, 1.1) * ts.imag() / 6);
                     ps.set("s" + std::to_string(i), s);
                     sum += s;
                   }
                   ps.set("s6", ts - sum);
                   return ps;
                 },
                 dispatch([](auto z, const ParamSet& ps) {
                   using R = decltype(z);
                   Six<R> s;
                   for (int i = 0; i < 6; ++i) s[i] = cast<R>(ps.get("s" + std::to_string(i + 1)));
                   const cplx<R> tau = arg<R>(ps, "tau"), sigma = arg<R>(ps, "sigma");
                   const Integral<R> l = spiridonov_lhs(s, tau, sigma);
                   return make_eval(l.value, spiridonov_rhs(s, tau, sigma), l.error);
                 }),
                 [](const ParamSet& ps) {
                   Six<double> s;
                   for (int i = 0; i < 6; ++i) s[i] = ps.get("s" + std::to_string(i + 1));
                   return records(spiridonov_lattices(s, ps.get("tau"), ps.get("sigma")));
                 },
                 nullptr});

  for (int sign : {1, -1}) {
    const bool first = sign > 0;
    out.push_back({first ? "eval1" : "eval2",
                   first ? "first-kind evaluation, cycle above -1/4 and below 1/4"
                         : "first-kind evaluation, cycle above 1/4 and below -1/4",
                   "Im tau, Im sigma in [0.5, 1.2]", EntryKind::numeric, 1e-8, 0,
                   [](SampleRng& r) {
                     ParamSet ps;
                     sample_pair(r, ps, "tau", "sigma");
                     return ps;
                   },
                   dispatch([first](auto z, const ParamSet& ps) {
                     using R = decltype(z);
                     const cplx<R> tau = arg<R>(ps, "tau"), sigma = arg<R>(ps, "sigma");
                     const Integral<R> l = first ? eval1_lhs(tau, sigma) : eval2_lhs(tau, sigma);
                     return make_eval(l.value, first ? eval1_rhs(tau, sigma) : eval2_rhs(tau, sigma), l.error);
                   }),
                   [sign](const ParamSet& ps) {
                     const C a(0.25 * sign);
                     const C tau = ps.get("tau"), sigma = ps.get("sigma");
                     return records<double>({upper_lattice(a, tau, sigma), lower_lattice(-a, tau, sigma)});
                   },
                   nullptr});
  }

  auto asym_poles = [](const ParamSet& ps) { return records(asym_lattices(ps.get("tau"), ps.get("eta"))); };

  out.push_back({"eval3", "second-kind theta hypergeometric evaluation",
                 "Im tau, Im eta in [0.2, 0.8] away from pinches of the two pole families", EntryKind::numeric, 1e-8, 0,
                 [](SampleRng& r) {
                   ParamSet ps;
                   sample_asym(r, ps);
                   ps.set("lambda", sample_point(r));
                   return ps;
                 },
                 dispatch([](auto z, const ParamSet& ps) {
                   using R = decltype(z);
                   const cplx<R> l = arg<R>(ps, "lambda"), tau = arg<R>(ps, "tau"), eta = arg<R>(ps, "eta");
                   const Integral<R> v = I_sym(l, tau, eta);
                   return make_eval(v.value, eval3_rhs(l, tau, eta), v.error);
                 }),
                 asym_poles, nullptr});

  out.push_back({"eval3.zero", "second-kind integral vanishing at lambda = 0 and lambda = +-2 eta",
                 "as eval3; point 0 selects lambda = 0, 1 selects 2 eta, 2 selects -2 eta", EntryKind::numeric, 1e-8, 0,
                 [](SampleRng& r) {
                   ParamSet ps;
                   sample_asym(r, ps);
                   ps.set("point", static_cast<double>(r.integer(0, 2)));
                   return ps;
                 },
                 dispatch([](auto z, const ParamSet& ps) {
                   using R = decltype(z);
                   const cplx<R> tau = arg<R>(ps, "tau"), eta = arg<R>(ps, "eta");
                   const long point = ps.integer("point");
                   const cplx<R> l = point == 0 ? cplx<R>(0) : (point == 1 ? R(2) : R(-2)) * eta;
                   const Integral<R> v = I_sym(l, tau, eta);
                   R scale;
                   if (point == 0) {
                     scale = std::abs(I_tilde(l, tau, eta).value);
                   } else {
                     scale = std::max(std::abs(I_tilde(R(2) * eta, tau, eta).value),
                                      std::abs(I_tilde(R(-2) * eta, tau, eta).value));
                   }
                   Evaluation e = make_eval(v.value, cplx<R>(0), v.error);
                   e.abs_scale = static_cast<double>(scale);
                   e.quadrature_bound = true;
                   return e;
                 }),
                 asym_poles, nullptr});

  for (int which : {1, 2}) {
    const bool first = which == 1;
    out.push_back({first ? "fv-val1" : "fv-val2",
                   first ? "Felder-Varchenko function at eta = -1/8" : "Felder-Varchenko function at eta = 1/8",
                   "Im tau, Im sigma in [0.5, 1.2]; lambda = mu = 1/2", EntryKind::numeric, 1e-8, 0,
                   [](SampleRng& r) {
                     ParamSet ps;
                     sample_pair(r, ps, "tau", "sigma");
                     return ps;
                   },
                   dispatch([first](auto z, const ParamSet& ps) {
                     using R = decltype(z);
                     const cplx<R> tau = arg<R>(ps, "tau"), sigma = arg<R>(ps, "sigma");
                     const cplx<R> h(R(0.5));
                     const Integral<R> u = fv_u(h, h, tau, sigma, cplx<R>(first ? R(-0.125) : R(0.125)));
                     return make_eval(u.value, first ? fv_val1_rhs(tau, sigma) : fv_val2_rhs(tau, sigma), u.error);
                   }),
                   [first](const ParamSet& ps) {
                     return records(fv_lattices(ps.get("tau"), ps.get("sigma"), C(first ? -0.125 : 0.125)));
                   },
                   nullptr});
  }

  out.push_back({"ellmac-val", "elliptic Macdonald polynomial P_{0,4} closed form",
                 "Im eta in [-0.5, -0.1], Im tau in [0.3, 1.2], 4 eta + N tau away from integers, lambda away from "
                 "theta zeros",
                 EntryKind::numeric, 1e-8, 0,
                 [](SampleRng& r) {
                   ParamSet ps;
                   sample_htf(r, ps, -0.5, -0.1, 0.3, 1.2, {"lambda"});
                   return ps;
                 },
                 dispatch([](auto z, const ParamSet& ps) {
                   using R = decltype(z);
                   const cplx<R> l = arg<R>(ps, "lambda"), tau = arg<R>(ps, "tau"), eta = arg<R>(ps, "eta");
                   const Integral<R> p = ellmac_P(0, 4, l, tau, eta);
                   return make_eval(p.value, ellmac_P04_closed(tau, eta), p.error);
                 }),
                 [](const ParamSet& ps) { return records(htf_lattices<double>(ps, 4)); }, nullptr});

  out.push_back({"ellmac-val.lambda", "P_{0,4} does not depend on lambda", "as ellmac-val, two values of lambda",
                 EntryKind::numeric, 1e-8, 0,
                 [](SampleRng& r) {
                   ParamSet ps;
                   sample_htf(r, ps, -0.5, -0.1, 0.3, 1.2, {"lambda1", "lambda2"});
                   return ps;
                 },
                 dispatch([](auto z, const ParamSet& ps) {
                   using R = decltype(z);
                   const cplx<R> tau = arg<R>(ps, "tau"), eta = arg<R>(ps, "eta");
                   const Integral<R> a = ellmac_P(0, 4, arg<R>(ps, "lambda1"), tau, eta);
                   const Integral<R> b = ellmac_P(0, 4, arg<R>(ps, "lambda2"), tau, eta);
                   return make_eval(a.value, b.value, a.error + b.error);
                 }),
                 [](const ParamSet& ps) { return records(htf_lattices<double>(ps, 4)); }, nullptr});

  out.push_back({"ellmac-eval", "elliptic Macdonald polynomial at lambda = 4 eta, tau = -8 eta",
                 "kappa in {4, 5, 6, 8}, mu in {0, 1, 2} with mu + 2 != +-1 mod kappa, Im eta in [-0.3, -0.1]",
                 EntryKind::numeric, 1e-8, 0,
                 [](SampleRng& r) {
                   static const std::vector<std::pair<long, long>> pairs = [] {
                     std::vector<std::pair<long, long>> v;
                     for (long kappa : {4, 5, 6, 8})
                       for (long mu : {0, 1, 2}) {
                         const long m = mod_floor(mu + 2, kappa);
                         if (m != 1 && m != kappa - 1) v.push_back({mu, kappa});
                       }
                     return v;
                   }();
                   ParamSet ps;
                   const auto& pk = pairs[static_cast<std::size_t>(r.integer(0, static_cast<long>(pairs.size()) - 1))];
                   ps.set("mu", static_cast<double>(pk.first));
                   ps.set("kappa", static_cast<double>(pk.second));
                   ps.set("eta", upper(r, -0.05, 0.05, -0.3, -0.1));
                   return ps;
                 },
                 dispatch([](auto z, const ParamSet& ps) {
                   using R = decltype(z);
                   const long mu = ps.integer("mu"), kappa = ps.integer("kappa");
                   const cplx<R> eta = arg<R>(ps, "eta");
                   const Integral<R> p = ellmac_P(mu, kappa, R(4) * eta, R(-8) * eta, eta);
                   const cplx<R> rhs = ellmac_eval_rhs(mu, kappa, eta);
                   Evaluation e = make_eval(p.value, rhs, p.error);
                   if (std::abs(rhs) == R(0)) e.abs_scale = 1.0;
                   return e;
                 }),
                 [](const ParamSet& ps) {
                   const C eta = ps.get("eta");
                   const double kappa = static_cast<double>(ps.integer("kappa"));
                   return records(fv_lattices(-8.0 * eta, -2.0 * kappa * eta, eta));
                 },
                 nullptr});

  out.push_back({"delta-series", "hypergeometric theta function: integral form against its defining j-series",
                 "kappa = 4, mu = 2, Im eta in [-0.15, -0.08], Im tau = 4|Im eta| + [0.15, 0.4]", EntryKind::numeric,
                 1e-6, 0,
                 [](SampleRng& r) {
                   ParamSet ps;
                   C tau, eta;
                   do {
                     eta = upper(r, -0.03, 0.03, -0.15, -0.08);
                     tau = upper(r, -0.1, 0.1, 4 * std::abs(eta.imag()) + 0.15, 4 * std::abs(eta.imag()) + 0.4);
                   } while (htf_pinched(tau, eta) || !separable(fv_lattices(tau, -8.0 * eta, eta)));
                   ps.set("tau", tau);
                   ps.set("eta", eta);
                   ps.set("lambda", upper(r, -0.3, 0.3, -0.05, 0.05));
                   return ps;
                 },
                 dispatch([](auto z, const ParamSet& ps) {
                   using R = decltype(z);
                   const cplx<R> l = arg<R>(ps, "lambda"), tau = arg<R>(ps, "tau"), eta = arg<R>(ps, "eta");
                   const Integral<R> a = delta_tilde(2, 4, l, tau, eta);
                   const Integral<R> b = delta_series(2, 4, l, tau, eta);
                   return make_eval(a.value, b.value, a.error + b.error);
                 }),
                 [](const ParamSet& ps) { return records(htf_lattices<double>(ps, 4)); }, nullptr});

  for (int which : {-1, 1}) {
    const bool minus = which < 0;
    out.push_back({minus ? "ellmac-mod-minus" : "ellmac-mod-plus",
                   minus ? "modular relation of P_{0,4} under tau -> -1/tau, eta -> eta/tau"
                         : "modular relation of P_{0,4} under tau -> -1/tau, eta -> -eta/tau",
                   minus ? "eta close to -i y with y in [0.15, 0.3], Re tau in [0.2, 0.5], Im tau in [0.7, 1.2]"
                         : "eta close to -i y with y in [0.15, 0.3], Re tau in [-0.5, -0.2], Im tau in [0.7, 1.2]",
                   EntryKind::numeric, 1e-6, 0,
                   [minus](SampleRng& r) {
                     ParamSet ps;
                     C tau, eta, lambda;
                     do {
                       eta = C(r.uniform(-0.01, 0.01), -r.uniform(0.15, 0.3));
                       tau = minus ? upper(r, 0.2, 0.5, 0.7, 1.2) : upper(r, -0.5, -0.2, 0.7, 1.2);
                     } while (htf_pinched(tau, eta) || !separable(fv_lattices(tau, -8.0 * eta, eta)));
                     do {
                       lambda = upper(r, -0.4, 0.4, -0.1, 0.1);
                     } while (near_theta_zero(lambda, tau, eta) ||
                              near_theta_zero(lambda, -1.0 / tau, (minus ? eta : -eta) / tau));
                     ps.set("lambda", lambda);
                     ps.set("tau", tau);
                     ps.set("eta", eta);
                     return ps;
                   },
                   dispatch([which](auto z, const ParamSet& ps) {
                     using R = decltype(z);
                     const cplx<R> l = arg<R>(ps, "lambda"), tau = arg<R>(ps, "tau"), eta = arg<R>(ps, "eta");
                     const Integral<R> v = modular_lhs(which, l, tau, eta);
                     return make_eval(v.value, modular_rhs(which, tau, eta), v.error);
                   }),
                   [](const ParamSet& ps) { return records(htf_lattices<double>(ps, 4)); }, nullptr});
  }
}

void add_lemmas(std::vector<IdentityEntry>& out) {
  auto sides = [](auto s) { return make_eval(s.lhs, s.rhs, s.quad_error); };
  auto t_lambda_tau = [](SampleRng& r) {
    ParamSet ps;
    ps.set("t", sample_point(r));
    ps.set("lambda", sample_point(r));
    ps.set("tau", upper(r, -0.3, 0.3, 0.5, 1.2));
    return ps;
  };
  auto asym_poles = [](const ParamSet& ps) { return records(asym_lattices(ps.get("tau"), ps.get("eta"))); };

  out.push_back({"lemma.sym-rearrange", "rearrangement of the elliptic gamma ratio in the second-kind integrand",
                 "generic t; Im tau, Im eta in [0.2, 0.8]", EntryKind::numeric, 1e-8, 0,
                 [](SampleRng& r) {
                   ParamSet ps;
                   sample_asym(r, ps);
                   ps.set("t", sample_point(r));
                   return ps;
                 },
                 dispatch([sides](auto z, const ParamSet& ps) {
                   using R = decltype(z);
                   return sides(lemma_sym_rearrange(arg<R>(ps, "t"), arg<R>(ps, "tau"), arg<R>(ps, "eta")));
                 }),
                 no_poles, nullptr});

  out.push_back({"lemma.int-rearrange", "second-kind integral rewritten with a symmetric gamma kernel",
                 "generic lambda; Im tau, Im eta in [0.2, 0.8] away from pinches", EntryKind::numeric, 1e-8, 0,
                 [](SampleRng& r) {
                   ParamSet ps;
                   sample_asym(r, ps);
                   ps.set("lambda", sample_point(r));
                   return ps;
                 },
                 dispatch([sides](auto z, const ParamSet& ps) {
                   using R = decltype(z);
                   return sides(lemma_int_rearrange(arg<R>(ps, "lambda"), arg<R>(ps, "tau"), arg<R>(ps, "eta")));
                 }),
                 asym_poles, nullptr});

  out.push_back({"lemma.theta-simp", "antisymmetrized theta product in t",
                 "generic t, lambda; Im tau in [0.5, 1.2]", EntryKind::numeric, 1e-8, 0, t_lambda_tau,
                 dispatch([sides](auto z, const ParamSet& ps) {
                   using R = decltype(z);
                   return sides(lemma_theta_simp(arg<R>(ps, "t"), arg<R>(ps, "lambda"), arg<R>(ps, "tau")));
                 }),
                 no_poles, nullptr});

  out.push_back({"lemma.full-sym", "theta product antisymmetrized in lambda and symmetrized in t",
                 "generic t, lambda; Im tau in [0.5, 1.2]", EntryKind::numeric, 1e-8, 0, t_lambda_tau,
                 dispatch([sides](auto z, const ParamSet& ps) {
                   using R = decltype(z);
                   return sides(lemma_full_sym(arg<R>(ps, "t"), arg<R>(ps, "lambda"), arg<R>(ps, "tau")));
                 }),
                 no_poles, nullptr});

  out.push_back({"lemma.theta-simp2", "two-term theta identity for any modular parameter sigma",
                 "generic z; Im sigma in [0.5, 1.2]", EntryKind::numeric, 1e-8, 0,
                 [](SampleRng& r) {
                   ParamSet ps;
                   ps.set("z", sample_point(r));
                   ps.set("sigma", upper(r, -0.3, 0.3, 0.5, 1.2));
                   return ps;
                 },
                 dispatch([sides](auto z, const ParamSet& ps) {
                   using R = decltype(z);
                   return sides(lemma_theta_simp2(arg<R>(ps, "z"), arg<R>(ps, "sigma")));
                 }),
                 no_poles, nullptr});

  out.push_back({"lemma.theta-simp3", "antisymmetrized theta product in lambda",
                 "generic t, lambda; Im tau in [0.5, 1.2]", EntryKind::numeric, 1e-8, 0, t_lambda_tau,
                 dispatch([sides](auto z, const ParamSet& ps) {
                   using R = decltype(z);
                   return sides(lemma_theta_simp3(arg<R>(ps, "t"), arg<R>(ps, "lambda"), arg<R>(ps, "tau")));
                 }),
                 no_poles, nullptr});

  out.push_back({"lemma.theta-simp4", "gamma product of the second integral evaluation in closed form",
                 "Im tau, Im eta in [0.2, 0.8]", EntryKind::numeric, 1e-8, 0,
                 [](SampleRng& r) {
                   ParamSet ps;
                   sample_asym(r, ps);
                   return ps;
                 },
                 dispatch([sides](auto z, const ParamSet& ps) {
                   using R = decltype(z);
                   return sides(lemma_theta_simp4(arg<R>(ps, "tau"), arg<R>(ps, "eta")));
                 }),
                 no_poles, nullptr});

  for (int which : {1, 2}) {
    out.push_back({which == 1 ? "lemma.int-eval1" : "lemma.int-eval2",
                   which == 1 ? "integral of the symmetric gamma kernel against theta0(t; 2 tau)^2"
                              : "integral of the symmetric gamma kernel against theta0(t + 1/2; 2 tau)^2",
                   "Im tau, Im eta in [0.2, 0.8] away from pinches", EntryKind::numeric, 1e-8, 0,
                   [](SampleRng& r) {
                     ParamSet ps;
                     sample_asym(r, ps);
                     return ps;
                   },
                   dispatch([sides, which](auto z, const ParamSet& ps) {
                     using R = decltype(z);
                     return sides(lemma_int_eval(which, arg<R>(ps, "tau"), arg<R>(ps, "eta")));
                   }),
                   asym_poles, nullptr});
  }
}

// ---------------------------------------------------------------- bridge entries

void sample_strip(SampleRng& r, ParamSet& ps) {
  C eta, tau, lam;
  do {
    eta = upper(r, -0.02, 0.02, -0.08, -0.03);
    const double y = std::abs(eta.imag());
    tau = upper(r, -0.2, 0.2, 6 * y + 0.1, 6 * y + 0.4);
  } while (htf_pinched(tau, eta) || !separable(fv_lattices(tau, -8.0 * eta, eta)));
  do {
    lam = upper(r, -0.3, 0.3, -0.05, 0.05);
  } while (near_theta_zero(lam, tau, eta));
  ps.set("q", std::exp(C(0, 2 * pi_v<double>) * eta));
  ps.set("lambda", lam / (2.0 * eta));
  ps.set("omega", -tau / (2.0 * eta));
}

std::vector<PoleRecord> bridge_poles(const ParamSet& ps, long kappa, C lambda, C omega) {
  const C eta = eta_from_q(ps.get("q"));
  (void)lambda;
  return records(fv_lattices(-2.0 * eta * omega, -2.0 * eta * static_cast<double>(kappa), eta));
}

void add_bridge(std::vector<IdentityEntry>& out) {
  out.push_back({"bridge.j002", "affine Macdonald normalization J_{0,0,2} = 1 through the elliptic bridge",
                 "|q| > 1 with Im eta in [-0.08, -0.03]; Im(-2 eta omega) = 6|Im eta| + [0.1, 0.4]",
                 EntryKind::numeric, 1e-6, 0,
                 [](SampleRng& r) {
                   ParamSet ps;
                   sample_strip(r, ps);
                   return ps;
                 },
                 dispatch([](auto z, const ParamSet& ps) {
                   using R = decltype(z);
                   const AffineParams<R> a{0, 0, arg<R>(ps, "q"), arg<R>(ps, "lambda"), arg<R>(ps, "omega")};
                   const BridgeValue<R> j = J_mu_k2(a);
                   return make_eval(j.value, cplx<R>(1), j.error);
                 }),
                 [](const ParamSet& ps) { return bridge_poles(ps, 4, ps.get("lambda"), ps.get("omega")); }, nullptr});

  out.push_back({"bridge.eval-conj", "affine Macdonald evaluation for n = 2, k = 2 at lambda = 2, omega = 4",
                 "(mu, k) in {0..3}^2 with mu + 2 != +-1 mod k + 4; |q| in [1.25, 1.6], arg q in [-0.1, 0.1]",
                 EntryKind::numeric, 1e-6, 0,
                 [](SampleRng& r) {
                   static const std::vector<std::pair<long, long>> pairs = [] {
                     std::vector<std::pair<long, long>> v;
                     for (long mu = 0; mu <= 3; ++mu)
                       for (long k = 0; k <= 3; ++k) {
                         const long m = mod_floor(mu + 2, k + 4);
                         if (m != 1 && m != k + 3) v.push_back({mu, k});
                       }
                     return v;
                   }();
                   ParamSet ps;
                   const auto& pk = pairs[static_cast<std::size_t>(r.integer(0, static_cast<long>(pairs.size()) - 1))];
                   ps.set("mu", static_cast<double>(pk.first));
                   ps.set("k", static_cast<double>(pk.second));
                   ps.set("q", std::polar(r.uniform(1.25, 1.6), r.uniform(-0.1, 0.1)));
                   return ps;
                 },
                 dispatch([](auto z, const ParamSet& ps) {
                   using R = decltype(z);
                   const BridgeCheck<R> c = eval_conj_check(ps.integer("mu"), ps.integer("k"), arg<R>(ps, "q"));
                   Evaluation e = make_eval(c.lhs, c.rhs, c.quad_error);
                   if (c.absolute) e.abs_scale = 1.0;
                   return e;
                 }),
                 [](const ParamSet& ps) { return bridge_poles(ps, ps.integer("k") + 4, C(2), C(4)); }, nullptr});
}

// ---------------------------------------------------------------- series entries

SeriesOutcome all_of(const std::vector<std::pair<std::string, bool>>& checks) {
  SeriesOutcome o{true, ""};
  std::ostringstream os;
  for (const auto& [name, ok] : checks) {
    if (!ok) {
      o.equal = false;
      os << (os.tellp() > 0 ? "; " : "") << "mismatch " << name;
    }
  }
  if (o.equal) os << checks.size() << " exact comparisons agree";
  o.detail = os.str();
  return o;
}

IdentityEntry series_entry(std::string id, std::string citation, std::string domain, long order,
                           std::function<SeriesOutcome(long)> check) {
  IdentityEntry e;
  e.id = std::move(id);
  e.citation = std::move(citation);
  e.domain = std::move(domain);
  e.kind = EntryKind::series;
  e.tolerance = 0;
  e.default_order = order;
  e.series_check = std::move(check);
  e.pole_inventory = no_poles;
  return e;
}

void add_series(std::vector<IdentityEntry>& out) {
  using namespace ellid::series;
  out.push_back(series_entry("series.triple-product", "Jacobi triple product for theta functions of level kappa",
                             "mu in {-2..3}, kappa in {1..4}", 12, [](long order) {
                               std::vector<std::pair<std::string, bool>> c;
                               for (long kappa = 1; kappa <= 4; ++kappa)
                                 for (long mu = -2; mu <= 3; ++mu)
                                   c.push_back({"mu=" + std::to_string(mu) + " kappa=" + std::to_string(kappa),
                                                series_triple_product_check(mu, kappa, order)});
                               return all_of(c);
                             }));
  out.push_back(series_entry(
      "series.denominator", "affine denominator conjecture against its proven n = 2, k = 2 case",
      "n = 2, k = 2 closed form; constant term for (n, k) in {(2,2), (2,3), (3,2)}; k = 1 trivial", 6,
      [](long order) {
        std::vector<std::pair<std::string, bool>> c;
        const std::vector<long> target{order, kExact, kExact};
        c.push_back({"n=2 k=2 closed form",
                     equal_up_to(denominator_conjecture_series(2, 2, order), denominator_theorem_series(order), target)});
        for (auto [n, k] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}}) {
          const LaurentSeries s = denominator_conjecture_series(n, k, order);
          const LaurentSeries l0 = denominator_layer0(n, k, s.ring_ptr());
          std::vector<long> t(s.ring().size(), kExact);
          t[0] = 1;
          c.push_back({"constant term n=" + std::to_string(n) + " k=" + std::to_string(k), equal_up_to(s, l0, t)});
        }
        const LaurentSeries one = denominator_conjecture_series(3, 1, order);
        c.push_back({"k=1", equal_up_to(one, LaurentSeries::constant(one.ring_ptr(), 1),
                                        std::vector<long>{order, kExact, kExact, kExact})});
        return all_of(c);
      }));
  out.push_back(series_entry("series.aff-eval", "affine evaluation conjecture against its proven n = 2, k = 2 case",
                             "(mu, k) in {0..3}^2, series in 1/q", 40, [](long order) {
                               std::vector<std::pair<std::string, bool>> c;
                               for (long mu = 0; mu <= 3; ++mu)
                                 for (long k = 0; k <= 3; ++k)
                                   c.push_back({"mu=" + std::to_string(mu) + " k=" + std::to_string(k),
                                                equal_up_to(aff_eval_conjecture_series(2, 2, {mu}, k, order),
                                                            aff_eval_theorem_series(mu, k, order), {order})});
                               return all_of(c);
                             }));
  out.push_back(series_entry("series.hall-limit", "affine Hall limit of the denominator correction factor",
                             "n in {2, 3}, k in {1, 2}", 8, [](long order) {
                               std::vector<std::pair<std::string, bool>> c;
                               for (int n : {2, 3})
                                 for (int k : {1, 2})
                                   c.push_back({"n=" + std::to_string(n) + " k=" + std::to_string(k),
                                                hall_limit_check(n, k, order)});
                               return all_of(c);
                             }));
  for (const std::string& id : theta_lemma_ids()) {
    out.push_back(series_entry("series." + id, "exact series form of lemma." + id,
                               "formal variables for the elliptic and nome arguments", 8, [id](long order) {
                                 return all_of({{id, theta_lemma_series_check(id, order)}});
                               }));
  }
}

std::vector<IdentityEntry> build_registry() {
  std::vector<IdentityEntry> out;
  add_integrals(out);
  add_lemmas(out);
  add_bridge(out);
  add_series(out);
  return out;
}

}  // namespace

const std::vector<IdentityEntry>& registry() {
  static const std::vector<IdentityEntry> entries = build_registry();
  return entries;
}

const IdentityEntry& find_identity(const std::string& id) {
  for (const auto& e : registry())
    if (e.id == id) return e;
  throw UnknownIdentity("unknown identity " + id);
}

}  // namespace ellid
