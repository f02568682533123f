#pragma once

// Quiver presentations: finite quivers with explicit relations, and the
// infinite families (linear, N-linear, cyclic, ZA3) given by a translation
// invariant relation scheme and realized on a finite window.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qshape/category.hpp"

namespace qshape {

struct SchemeTerm {
  mpq_class coeff{1};
  std::vector<std::string> arrows;  // arrow names in diagrammatic order
};
using Scheme = std::vector<SchemeTerm>;

struct QuiverSpec {
  struct ArrowSpec {
    std::string name, src, tgt;
  };

  Kind kind = Kind::Finite;
  int param = 0;
  std::vector<std::string> objects;  // finite kind
  std::vector<ArrowSpec> arrows;     // finite kind
  std::vector<Scheme> relations;     // explicit relations or relation scheme
  bool relations_given = false;
  std::vector<std::string> omit;  // start objects whose scheme instances are skipped

  static QuiverSpec linear(std::vector<Scheme> rels = {}) {
    QuiverSpec s;
    s.kind = Kind::Linear;
    s.relations = std::move(rels);
    s.relations_given = !s.relations.empty();
    return s;
  }
  static QuiverSpec complexes() { return linear({Scheme{{1, {"d", "d"}}}}); }
  static QuiverSpec nlinear(int N) {
    QuiverSpec s;
    s.kind = Kind::NLinear;
    s.param = N;
    return s;
  }
  static QuiverSpec cyclic(int m) {
    QuiverSpec s;
    s.kind = Kind::Cyclic;
    s.param = m;
    return s;
  }
  static QuiverSpec za3() {
    QuiverSpec s;
    s.kind = Kind::ZA3;
    return s;
  }
  static QuiverSpec point() {
    QuiverSpec s;
    s.objects = {"*"};
    return s;
  }

  bool infinite() const { return kind == Kind::Linear || kind == Kind::NLinear || kind == Kind::ZA3; }

  std::vector<Scheme> effective_relations() const {
    if (relations_given) return relations;
    switch (kind) {
      case Kind::NLinear: {
        SchemeTerm t;
        t.arrows.assign(static_cast<std::size_t>(param), "d");
        return {Scheme{t}};
      }
      case Kind::Cyclic: return {Scheme{{1, {"d", "d"}}}};
      case Kind::ZA3: return {Scheme{{1, {"up", "dn"}}, {1, {"dn", "up"}}}};
      default: return relations;
    }
  }
};

inline std::string za3_label(int x, int y) { return "(" + std::to_string(x) + "," + std::to_string(y) + ")"; }

namespace detail {

struct InfiniteQuiver {
  using Coord = std::vector<int>;
  Kind kind;
  int param;

  bool valid(const Coord& c) const {
    if (kind == Kind::ZA3) {
      const int x = c[0], y = c[1];
      return (x % 2 == 0) ? (y == 1 || y == -1) : (y == 0);
    }
    if (kind == Kind::Cyclic) return c[0] >= 0 && c[0] < param;
    return true;
  }
  std::optional<Coord> step(const Coord& c, const std::string& name) const {
    switch (kind) {
      case Kind::Linear:
      case Kind::NLinear:
        if (name == "d") return Coord{c[0] - 1};
        return std::nullopt;
      case Kind::Cyclic:
        if (name == "d") return Coord{(c[0] - 1 + param) % param};
        return std::nullopt;
      case Kind::ZA3:
        if (name == "up" && c[1] < 1) return Coord{c[0] + 1, c[1] + 1};
        if (name == "dn" && c[1] > -1) return Coord{c[0] + 1, c[1] - 1};
        return std::nullopt;
      default: return std::nullopt;
    }
  }
  std::vector<std::string> names() const {
    if (kind == Kind::ZA3) return {"dn", "up"};
    return {"d"};
  }
  /// Arrows entering c: (source, name).
  std::vector<std::pair<Coord, std::string>> incoming(const Coord& c) const {
    std::vector<std::pair<Coord, std::string>> out;
    switch (kind) {
      case Kind::Linear:
      case Kind::NLinear: out.push_back({Coord{c[0] + 1}, "d"}); break;
      case Kind::Cyclic: out.push_back({Coord{(c[0] + 1) % param}, "d"}); break;
      case Kind::ZA3:
        for (const auto& name : names())
          for (int dy : {-1, 1}) {
            Coord s{c[0] - 1, c[1] + dy};
            if (valid(s)) {
              auto t = step(s, name);
              if (t && *t == c) out.push_back({s, name});
            }
          }
        break;
      default: break;
    }
    return out;
  }
  std::string label(const Coord& c) const {
    if (kind == Kind::ZA3) return za3_label(c[0], c[1]);
    return std::to_string(c[0]);
  }
};

}  // namespace detail

/// Realize the spec on a window. For linear kinds the window is a degree range;
/// for ZA3 it bounds the x coordinate; finite and cyclic kinds ignore it.
inline Presentation realize(const QuiverSpec& spec, int lo = 0, int hi = 0) {
  Presentation pres;
  pres.shape.kind = spec.kind;
  pres.shape.param = spec.param;
  pres.shape.lo = lo;
  pres.shape.hi = hi;

  if (spec.kind == Kind::Finite) {
    std::map<std::string, std::size_t> idx;
    auto add_obj = [&](const std::string& l) {
      if (idx.count(l)) return idx[l];
      idx[l] = pres.objects.size();
      pres.objects.push_back(l);
      pres.shape.coords.push_back({static_cast<int>(pres.objects.size()) - 1});
      return idx[l];
    };
    for (const auto& o : spec.objects) add_obj(o);
    std::map<std::string, std::size_t> aidx;
    for (const auto& a : spec.arrows) {
      if (aidx.count(a.name)) throw AdmissibilityError("duplicate arrow name " + a.name);
      aidx[a.name] = pres.arrows.size();
      pres.arrows.push_back({a.name, a.name, add_obj(a.src), add_obj(a.tgt)});
    }
    std::size_t rn = 0;
    for (const auto& scheme : spec.effective_relations()) {
      RelationData rel;
      rel.label = "r" + std::to_string(rn++);
      bool first = true;
      for (const auto& t : scheme) {
        PathTerm pt{t.coeff, {}};
        for (const auto& name : t.arrows) {
          auto it = aidx.find(name);
          if (it == aidx.end()) throw AdmissibilityError("relation uses unknown arrow " + name);
          pt.path.push_back(it->second);
        }
        if (pt.path.empty()) throw AdmissibilityError("empty relation term");
        if (first) {
          rel.src = pres.arrows[pt.path.front()].src;
          rel.tgt = pres.arrows[pt.path.back()].tgt;
          first = false;
        }
        rel.terms.push_back(std::move(pt));
      }
      if (!rel.terms.empty()) pres.relations.push_back(std::move(rel));
    }
    pres.open_in.assign(pres.objects.size(), false);
    pres.open_out.assign(pres.objects.size(), false);
    return pres;
  }

  detail::InfiniteQuiver iq{spec.kind, spec.param};
  using Coord = detail::InfiniteQuiver::Coord;
  std::vector<Coord> coords;
  if (spec.kind == Kind::Cyclic) {
    if (spec.param < 1) throw AdmissibilityError("cyclic quiver needs m >= 1");
    for (int q = 0; q < spec.param; ++q) coords.push_back({q});
  } else if (spec.kind == Kind::ZA3) {
    if (lo > hi) throw AdmissibilityError("empty window");
    for (int x = lo; x <= hi; ++x)
      for (int y = -1; y <= 1; ++y)
        if (iq.valid({x, y})) coords.push_back({x, y});
  } else {
    if (lo > hi) throw AdmissibilityError("empty window");
    if (spec.kind == Kind::NLinear && spec.param < 2) throw AdmissibilityError("nlinear needs N >= 2");
    for (int q = lo; q <= hi; ++q) coords.push_back({q});
  }
  std::map<Coord, std::size_t> index;
  for (const auto& c : coords) {
    index[c] = pres.objects.size();
    pres.objects.push_back(iq.label(c));
  }
  pres.shape.coords = coords;
  pres.open_in.assign(coords.size(), false);
  pres.open_out.assign(coords.size(), false);

  std::map<std::pair<std::size_t, std::string>, std::size_t> arrow_at;
  for (const auto& c : coords) {
    const auto s = index[c];
    for (const auto& name : iq.names()) {
      auto t = iq.step(c, name);
      if (!t) continue;
      auto it = index.find(*t);
      if (it == index.end()) {
        pres.open_out[s] = true;
        continue;
      }
      arrow_at[{s, name}] = pres.arrows.size();
      pres.arrows.push_back({name, name + "@" + iq.label(c), s, it->second});
    }
    for (const auto& in : iq.incoming(c))
      if (!index.count(in.first)) pres.open_in[s] = true;
  }

  std::set<std::string> omitted(spec.omit.begin(), spec.omit.end());
  const auto schemes = spec.effective_relations();
  for (std::size_t si = 0; si < schemes.size(); ++si) {
    for (const auto& c : coords) {
      const auto s = index[c];
      if (omitted.count(pres.objects[s])) continue;
      RelationData rel;
      rel.label = (schemes.size() > 1 ? "r" + std::to_string(si) : std::string("r")) + "@" + pres.objects[s];
      rel.src = s;
      bool skip = false, have_end = false;
      for (const auto& t : schemes[si]) {
        Coord cur = c;
        PathTerm pt{t.coeff, {}};
        bool exists = true;
        for (const auto& name : t.arrows) {
          auto nxt = iq.step(cur, name);
          if (!nxt) {
            exists = false;
            break;
          }
          auto it = arrow_at.find({index.count(cur) ? index[cur] : SIZE_MAX, name});
          if (!index.count(cur) || it == arrow_at.end()) {
            skip = true;
            break;
          }
          pt.path.push_back(it->second);
          cur = *nxt;
        }
        if (skip) break;
        if (!exists) continue;
        const auto end = pres.arrows[pt.path.back()].tgt;
        if (have_end && end != rel.tgt) throw AdmissibilityError("relation scheme terms end at different objects");
        rel.tgt = end;
        have_end = true;
        rel.terms.push_back(std::move(pt));
      }
      if (skip || rel.terms.empty()) continue;
      pres.relations.push_back(std::move(rel));
    }
  }
  return pres;
}

template <class F>
std::shared_ptr<const KCategory<F>> build_category(const F& field, const QuiverSpec& spec, int lo = 0, int hi = 0) {
  return KCategory<F>::build(field, realize(spec, lo, hi));
}

}  // namespace qshape
