#pragma once

// Command dispatch for the qshape tool: realize a workspace, run one command,
// and report as text or JSON. Predicate commands exit with 2 when the verdict
// is false; errors exit with 1.

#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qshape/dsl.hpp"
#include "qshape/stable.hpp"

namespace qshape::cli {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string command;
  std::string format = "text";
  std::optional<std::string> window, field;
  std::string rep, mor, from, to, witness, q, structure = "projective";
  std::optional<int> i, power, degree;
  bool tor = false, full = false;
};

struct Report {
  Json json = Json::object();
  std::vector<std::pair<std::string, std::string>> lines;
  int exit_code = 0;

  void add(const std::string& key, const Json& v, std::string text_key = "") {
    json[key] = v;
    lines.emplace_back(text_key.empty() ? key : text_key, render(v, key == "witness" ? "none" : "unknown"));
  }
  std::string text() const {
    std::string s;
    for (const auto& [k, v] : lines) s += k + ": " + v + "\n";
    return s;
  }
  std::string emit(const std::string& format) const { return format == "json" ? json.dump(2) + "\n" : text(); }

 private:
  static std::string render(const Json& v, const char* null_text) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return null_text;
    return v.dump();
  }
};

inline Json label_json(const std::string& label) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(label, &used);
    if (used == label.size()) return v;
  } catch (const std::exception&) {
  }
  return label;
}

inline Json flag_json(Flag f) { return f == Flag::Unknown ? Json(nullptr) : Json(f == Flag::Yes); }

inline std::pair<int, int> parse_window(const std::string& s) {
  auto dots = s.find("..");
  if (dots == std::string::npos) throw UsageError("--window expects lo..hi, got " + s);
  try {
    const int lo = std::stoi(s.substr(0, dots)), hi = std::stoi(s.substr(dots + 2));
    if (lo > hi) throw UsageError("--window: lo exceeds hi");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError("--window expects lo..hi, got " + s);
  }
}

/// "Q" or "Fp(p)"; nullopt stands for the rationals.
inline std::optional<long> parse_field(const std::string& s) {
  if (s == "Q") return std::nullopt;
  if (s.rfind("Fp(", 0) == 0 && s.back() == ')') {
    try {
      std::size_t used = 0;
      const auto p = std::stol(s.substr(3, s.size() - 4), &used);
      if (used == s.size() - 4 && p >= 2) return p;
    } catch (const std::logic_error&) {
    }
  }
  throw UsageError("unknown field " + s + " (use Q or Fp(p))");
}

/// Homological degree and extra shift a command needs around the support.
inline std::pair<int, int> reach(const Options& o) {
  if (o.command == "homology" || o.command == "ext") return {o.i.value_or(1), 0};
  if (o.command == "resolve") return {o.degree.value_or(2), 0};
  if (o.command == "suspend") return {2, o.power.value_or(1) + 1};
  if (o.command == "stable-hom" || o.command == "dq-hom" || o.command == "cone" || o.command == "classify")
    return {2, 2};
  return {2, 0};
}

/// The window: explicit flag, then the workspace, then the support hull padded
/// by nilpotency degree x (i + 2).
template <class F>
std::pair<int, int> choose_window(const F& field, const dsl::Workspace& w, const Options& o) {
  if (o.window) return parse_window(*o.window);
  if (w.category.window) return *w.category.window;
  if (!w.category.infinite()) return {0, 0};
  auto cs = dsl::mentioned_coords(w);
  int lo = 0, hi = 0;
  if (!cs.empty()) {
    lo = *std::min_element(cs.begin(), cs.end());
    hi = *std::max_element(cs.begin(), cs.end());
  }
  std::size_t nil = 1;
  try {
    auto probe = build_category(field, w.category.spec(), lo - 2, hi + 2);
    if (probe->nilpotence().ok) nil = std::max<std::size_t>(1, probe->nilpotence().degree);
  } catch (const AdmissibilityError& e) {
    throw dsl::SourceError(w.category.pos, e.what());
  }
  const auto [i, extra] = reach(o);
  const int pad = static_cast<int>(nil) * (i + 2) + extra;
  return {lo - pad, hi + pad + extra};
}

template <class F>
class Runner {
 public:
  Runner(const F& field, const dsl::Workspace& w, const Options& o)
      : o_(o), win_(choose_window(field, w, o)), ws_(field, w, win_.first, win_.second) {}

  Report run() {
    const auto& c = o_.command;
    try {
      if (c == "validate") return validate();
      if (c == "homology") return homology();
      if (c == "is-exact") return is_exact();
      if (c == "is-weq") return is_weq();
      if (c == "ext") return ext();
      if (c == "resolve") return resolve();
      if (c == "suspend") return suspend();
      if (c == "stable-hom") return stable_hom(false);
      if (c == "dq-hom") return stable_hom(true);
      if (c == "cone") return cone();
      if (c == "classify") return classify();
      if (c == "perfect") return perfect();
    } catch (const dsl::SourceError&) {
      throw;
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      throw dsl::SourceError(primary_pos(), e.what());
    }
    throw UsageError("unknown command " + c);
  }

 private:
  dsl::Pos primary_pos() const {
    const auto& w = ws_.workspace();
    if (!o_.mor.empty())
      if (auto m = w.mor(o_.mor)) return m->pos;
    for (const auto& n : {o_.rep, o_.from, o_.witness})
      if (!n.empty())
        if (auto r = w.rep(n)) return r->pos;
    return w.category.pos;
  }

  RepPtr<F> rep(const std::string& flag, const std::string& name) const {
    if (name.empty()) throw UsageError(o_.command + " needs " + flag);
    if (!ws_.workspace().rep(name)) throw UsageError(flag + ": no rep named " + name);
    return ws_.rep(name);
  }
  const RepMorphism<F>& mor(const std::string& name) const {
    if (name.empty()) throw UsageError(o_.command + " needs --mor");
    if (!ws_.workspace().mor(name)) throw UsageError("--mor: no mor named " + name);
    return ws_.mor(name);
  }
  const QA<F>& qa() const { return ws_.qa(); }
  const KCategory<F>& Q() const { return *ws_.Q(); }

  SerreData<F> serre() const {
    auto sd = find_serre(Q());
    if (!std::holds_alternative<SerreData<F>>(sd))
      throw std::runtime_error("no Serre functor on this window: " + std::get<SerreFailure>(sd).reason);
    return std::get<SerreData<F>>(sd);
  }

  Json dims_json(const Representation<F>& x) const {
    Json j = Json::object();
    for (auto q : qa().q_support(x)) {
      if (qa().nA() == 1) {
        j[Q().label(q)] = qa().dim_at(x, q);
      } else {
        Json d = Json::array();
        for (std::size_t v = 0; v < qa().nA(); ++v) d.push_back(x.dim(qa().obj(q, v)));
        j[Q().label(q)] = d;
      }
    }
    return j;
  }

  static Report verdict(bool v, const Json& witness) {
    Report r;
    r.add("verdict", v);
    r.add("witness", witness);
    r.exit_code = v ? 0 : 2;
    return r;
  }

  Report validate() {
    auto rep = validate_setup(Q());
    Report r;
    r.add("all_pass", rep.all_pass());
    r.add("nilpotence_degree", rep.nilpotency_degree);
    if (ws_.workspace().category.infinite()) r.add("window", Json::array({ws_.lo(), ws_.hi()}));
    Json serre = Json::object();
    if (rep.serre_data)
      for (const auto& [p, s] : rep.serre_data->S) serre[Q().label(p)] = label_json(Q().label(s));
    r.add("serre_map", serre);
    Json checks = Json::object();
    auto check = [&](const char* name, const Verdict& v) {
      Json j = {{"pass", v.pass}};
      if (!v.pass) j["witness"] = v.witness;
      checks[name] = j;
    };
    check("preadditive", rep.preadditive);
    check("hom_finite", rep.hom_finite);
    check("locally_bounded", rep.locally_bounded);
    check("serre", rep.serre);
    check("strong_retraction", rep.strong_retraction);
    check("nilpotence", rep.nilpotence);
    r.add("checks", checks);
    r.add("has_cycles", rep.has_cycles);
    r.exit_code = rep.all_pass() ? 0 : 2;
    return r;
  }

  std::size_t object_arg() const {
    if (o_.q.empty()) throw UsageError(o_.command + " needs --q");
    auto q = Q().find(o_.q);
    if (!q) throw UsageError("--q: object " + o_.q + " is not in the window");
    return *q;
  }

  Report homology() {
    auto x = rep("--rep", o_.rep);
    const auto q = object_arg();
    const auto i = o_.i.value_or(1);
    if (i < 0) throw UsageError("--i must be non-negative");
    Homology<F> h(qa());
    auto v = o_.tor ? h.tor(q, static_cast<std::size_t>(i), *x) : h.cohom(q, static_cast<std::size_t>(i), *x);
    Report r;
    r.add("q", label_json(Q().label(q)));
    r.add("i", i);
    r.add("variance", o_.tor ? "tor" : "cohom");
    r.add("dim", v.dim());
    r.add("A_action", qa().module_to_json(*v.module));
    return r;
  }

  Report is_exact() {
    auto x = rep("--rep", o_.rep);
    Homology<F> h(qa());
    const bool v = h.is_exact(*x);
    Json w = nullptr;
    if (!v)
      for (const auto& hv : h.all(1, *x, true))
        if (hv.dim()) {
          w = {{"q", label_json(Q().label(hv.q))}, {"i", 1}, {"dim", hv.dim()}};
          break;
        }
    return verdict(v, w);
  }

  Report is_weq() {
    const auto& f = mor(o_.mor);
    Homology<F> h(qa());
    auto fail = h.weq_failure(f);
    Json w = nullptr;
    if (fail) w = {{"i", fail->first}, {"q", label_json(Q().label(fail->second))}};
    return verdict(!fail, w);
  }

  Report ext() {
    auto x = rep("--from", o_.from), y = rep("--to", o_.to);
    const auto i = o_.i.value_or(1);
    if (i < 0) throw UsageError("--i must be non-negative");
    Report r;
    r.add("i", i);
    r.add("from", o_.from);
    r.add("to", o_.to);
    r.add("dim", ext_qa(static_cast<std::size_t>(i), x, *y));
    return r;
  }

  Report resolve() {
    auto x = rep("--rep", o_.rep);
    const auto n = o_.degree.value_or(2);
    if (n < 0) throw UsageError("--degree must be non-negative");
    Resolution<F> res(x);
    res.ensure(static_cast<std::size_t>(n));
    Json layers = Json::array();
    for (int k = 0; k <= n; ++k) {
      Json g = Json::array();
      for (auto t : res.gens(static_cast<std::size_t>(k))) g.push_back(label_json(qa().T().label(t)));
      layers.push_back({{"degree", k}, {"generators", g}});
    }
    Report r;
    r.add("rep", o_.rep);
    r.add("layers", layers);
    auto len = res.length();
    r.add("length", len ? Json(*len) : Json(nullptr));
    return r;
  }

  Report suspend() {
    auto x = rep("--rep", o_.rep);
    const auto k = o_.power.value_or(1);
    if (k < 1) throw UsageError("--power must be positive");
    Frobenius<F> fr(qa(), serre());
    auto s = fr.suspension_power(x, static_cast<std::size_t>(k));
    Report r;
    r.add("rep", o_.rep);
    r.add("power", k);
    r.add("dims", dims_json(*s));
    bool same = false;
    try {
      same = fr.stable_isomorphism(s, x).has_value();
    } catch (const std::invalid_argument&) {
      same = false;
    }
    r.add("stably_isomorphic_to_source", same, "stably isomorphic to " + o_.rep);
    if (o_.full) r.add("result", qa().to_json(*s));
    return r;
  }

  Report stable_hom(bool derived) {
    auto x = rep("--from", o_.from), y = rep("--to", o_.to);
    Frobenius<F> fr(qa(), serre());
    auto h = derived ? fr.dq_hom(x, y) : fr.stable_hom(x, y);
    Report r;
    r.add("from", o_.from);
    r.add("to", o_.to);
    r.add("ambient_dim", h.ambient_dim());
    r.add("subspace_dim", h.subspace_dim());
    r.add("dim", h.dim());
    if (o_.full) {
      Json reps = Json::array();
      for (const auto& m : h.representatives()) reps.push_back(qa().morphism_to_json(m));
      r.add("representatives", reps);
    }
    return r;
  }

  Report cone() {
    const auto& f = mor(o_.mor);
    Frobenius<F> fr(qa(), serre());
    auto t = fr.cone(f);
    const bool legs = fr.stable_hom(t.X(), t.C()).is_zero(compose(t.g, t.f)) &&
                      fr.stable_hom(t.Y(), t.SX()).is_zero(compose(t.h, t.g));
    Report r;
    r.add("mor", o_.mor);
    r.add("dims", dims_json(*t.C()));
    r.add("stably_zero", is_projective(t.C()));
    r.add("legs_stably_zero", legs);
    if (o_.full) r.add("cone", qa().to_json(*t.C()));
    return r;
  }

  Report classify() {
    const auto& f = mor(o_.mor);
    if (o_.structure != "projective" && o_.structure != "injective")
      throw UsageError("--structure must be projective or injective");
    Frobenius<F> fr(qa(), serre());
    auto c = fr.classify_morphism(f, o_.structure == "projective" ? ModelStructure::Projective
                                                                  : ModelStructure::Injective);
    Report r;
    r.add("mor", o_.mor);
    r.add("structure", o_.structure);
    r.add("weq", flag_json(c.weq));
    r.add("cof", flag_json(c.cof));
    r.add("fib", flag_json(c.fib));
    r.add("trivial_cof", flag_json(c.trivial_cof));
    r.add("trivial_fib", flag_json(c.trivial_fib));
    return r;
  }

  Report perfect() {
    auto x = rep("--rep", o_.rep);
    Frobenius<F> fr(qa(), serre());
    if (o_.witness.empty()) {
      const bool v = fr.is_strictly_perfect(*x);
      auto r = verdict(v, nullptr);
      r.add("certificate", to_string(fr.certify_semiprojective(x).reason));
      return r;
    }
    auto k = rep("--witness", o_.witness);
    const auto& f = mor(o_.mor);
    if (f.source != k || f.target != x) throw UsageError("--mor must go from the witness to --rep");
    return verdict(fr.perfect_witness(f), nullptr);
  }

  Options o_;
  std::pair<int, int> win_;
  dsl::Realized<F> ws_;
};

/// Parse, realize and run. Source errors carry line and column.
inline Report run(const Options& o, const std::string& source) {
  auto w = dsl::parse(source);
  std::string fname = "Q";
  if (const char* env = std::getenv("QSHAPE_FIELD"); env && *env) fname = env;
  if (w.field) fname = *w.field;
  if (o.field) fname = *o.field;
  std::optional<long> p;
  try {
    p = parse_field(fname);
    if (p) PrimeField{static_cast<std::uint32_t>(*p)};
  } catch (const std::exception& e) {
    if (o.field || !w.field) throw UsageError(e.what());
    throw dsl::SourceError(w.field_pos, e.what());
  }
  if (!p) return Runner<Rationals>(Rationals{}, w, o).run();
  return Runner<PrimeField>(PrimeField(static_cast<std::uint32_t>(*p)), w, o).run();
}

}  // namespace qshape::cli
