#pragma once

// The .qs workspace language: lexer, syntax tree, parser, normalizing
// printer, and realization of a parsed workspace over a chosen field.
//
//   workspace  := { item }
//   item       := "field" "=" ( "Q" | "Fp" "(" INT ")" )
//               | "category" "{" { cat_item } "}"
//               | "algebra" "{" { alg_item } "}"
//               | "rep" IDENT ( "{" { rep_item } "}" | "=" shorthand )
//               | "mor" IDENT ":" IDENT "->" IDENT ( "{" { "at" obj ":" matrix } "}" | "=" ( "id" | "zero" ) )
//   cat_item   := "kind" "=" kind | alg_item | "omit" "=" obj { "," obj } | "window" "=" sint ".." sint
//   kind       := "finite" | "linear" | "nlinear" "(" "N" "=" INT ")" | "cyclic" "(" "m" "=" INT ")" | "za3"
//   alg_item   := "objects" "=" obj { "," obj } | "arrow" IDENT ":" obj "->" obj | "relation" "=" sum
//   sum        := [ "-" ] term { ( "+" | "-" ) term }
//   term       := [ rational [ "*" ] ] IDENT { ";" IDENT }
//   rep_item   := "at" obj ":" ( "dim" dims | IDENT "=" matrix ) | IDENT [ "@" obj ] ":" matrix
//   shorthand  := ( "stalk" | "proj" | "inj" ) "(" obj [ "," ( "A" | "S" "(" obj ")" ) ] ")"
//   dims       := INT | "(" INT { "," INT } ")"
//   matrix     := "[" [ row { "," row } ] "]"      row := "[" [ entry { "," entry } ] "]"
//   obj        := sint | "(" sint "," sint ")" | IDENT
//
// Paths compose left to right: a;b is a, then b. Comments run from # to the
// end of the line.

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qshape/qa.hpp"

namespace qshape::dsl {

/// A source position. Positions never take part in equality of syntax trees.
struct Pos {
  int line = 0, col = 0;
  bool operator==(const Pos&) const { return true; }
  std::string str() const { return std::to_string(line) + ":" + std::to_string(col); }
};

/// An error tied to a place in the source.
struct SourceError : std::runtime_error {
  Pos pos;
  SourceError(Pos p, const std::string& msg) : std::runtime_error(p.str() + ": " + msg), pos(p) {}
};

struct ParseError : SourceError {
  std::vector<std::string> expected;
  ParseError(Pos p, std::vector<std::string> exp, const std::string& found)
      : SourceError(p, "expected " + join(exp) + ", found " + found), expected(std::move(exp)) {}

 private:
  static std::string join(const std::vector<std::string>& v) {
    if (v.size() == 1) return v[0];
    std::string s = "one of";
    for (const auto& e : v) s += " " + e;
    return s;
  }
};

// --- lexer -------------------------------------------------------------------

enum class Tok { Ident, Int, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  Pos pos;
  std::string show() const { return kind == Tok::End ? "end of input" : "'" + text + "'"; }
};

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto adv = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') adv(1);
      continue;
    }
    Pos p{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      out.push_back({Tok::Ident, src.substr(i, j - i), p});
      adv(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Tok::Int, src.substr(i, j - i), p});
      adv(j - i);
      continue;
    }
    if (src.compare(i, 2, "->") == 0 || src.compare(i, 2, "..") == 0) {
      out.push_back({Tok::Sym, src.substr(i, 2), p});
      adv(2);
      continue;
    }
    if (std::string("{}()[],:;=+-*/@").find(c) != std::string::npos) {
      out.push_back({Tok::Sym, std::string(1, c), p});
      adv(1);
      continue;
    }
    throw SourceError(p, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, "", Pos{line, col}});
  return out;
}

// --- syntax tree -------------------------------------------------------------

struct ArrowDecl {
  std::string name, src, tgt;
  Pos pos;
  bool operator==(const ArrowDecl&) const = default;
};

struct TermDecl {
  std::string coeff;  // canonical rational
  std::vector<std::string> path;
  bool operator==(const TermDecl&) const = default;
};

struct RelationDecl {
  std::vector<TermDecl> terms;
  Pos pos;
  bool operator==(const RelationDecl&) const = default;
};

struct QuiverDecl {
  std::string kind = "finite";
  int param = 0;
  std::vector<std::string> objects;
  std::vector<ArrowDecl> arrows;
  std::vector<RelationDecl> relations;
  std::vector<std::string> omit;
  std::optional<std::pair<int, int>> window;
  Pos pos;
  bool present = false;
  bool operator==(const QuiverDecl&) const = default;

  QuiverSpec spec() const {
    QuiverSpec s;
    if (kind == "linear")
      s.kind = Kind::Linear;
    else if (kind == "nlinear")
      s.kind = Kind::NLinear;
    else if (kind == "cyclic")
      s.kind = Kind::Cyclic;
    else if (kind == "za3")
      s.kind = Kind::ZA3;
    s.param = param;
    s.objects = objects;
    for (const auto& a : arrows) s.arrows.push_back({a.name, a.src, a.tgt});
    for (const auto& r : relations) {
      Scheme sc;
      for (const auto& t : r.terms) sc.push_back({mpq_class(t.coeff), t.path});
      s.relations.push_back(std::move(sc));
    }
    s.relations_given = !relations.empty();
    s.omit = omit;
    return s;
  }
  bool infinite() const { return kind == "linear" || kind == "nlinear" || kind == "za3"; }
};

using MatrixDecl = std::vector<std::vector<std::string>>;

struct DimDecl {
  std::string obj;
  std::vector<std::size_t> dims;
  Pos pos;
  bool operator==(const DimDecl&) const = default;
};

struct ActionDecl {
  std::string obj, arrow;
  MatrixDecl m;
  Pos pos;
  bool operator==(const ActionDecl&) const = default;
};

struct MapDecl {
  std::string arrow;  // realized arrow label, e.g. d@1
  MatrixDecl m;
  Pos pos;
  bool operator==(const MapDecl&) const = default;
};

struct RepDecl {
  std::string name;
  std::string form = "block";  // block | stalk | proj | inj
  std::string at;
  std::string module = "A";  // A or the label of an A-vertex for its simple
  std::vector<DimDecl> dims;
  std::vector<ActionDecl> actions;
  std::vector<MapDecl> maps;
  Pos pos;
  bool operator==(const RepDecl&) const = default;
};

struct CompDecl {
  std::string obj;
  MatrixDecl m;
  Pos pos;
  bool operator==(const CompDecl&) const = default;
};

struct MorDecl {
  std::string name, src, tgt;
  std::string form = "block";  // block | id | zero
  std::vector<CompDecl> comps;
  Pos pos;
  bool operator==(const MorDecl&) const = default;
};

struct Workspace {
  std::optional<std::string> field;  // "Q" or "Fp(p)"
  Pos field_pos;
  QuiverDecl category;
  std::optional<QuiverDecl> algebra;
  std::vector<RepDecl> reps;
  std::vector<MorDecl> mors;
  bool operator==(const Workspace&) const = default;

  const RepDecl* rep(const std::string& n) const {
    for (const auto& r : reps)
      if (r.name == n) return &r;
    return nullptr;
  }
  const MorDecl* mor(const std::string& n) const {
    for (const auto& m : mors)
      if (m.name == n) return &m;
    return nullptr;
  }
};

// --- parser ------------------------------------------------------------------

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) {}

  Workspace workspace() {
    Workspace w;
    while (!at_end()) {
      const auto& t = peek();
      if (is("field")) {
        w.field_pos = t.pos;
        next();
        expect("=");
        if (accept("Q")) {
          w.field = "Q";
        } else {
          expect_word({"Q", "Fp"});
          expect("(");
          auto p = integer();
          expect(")");
          w.field = "Fp(" + std::to_string(p) + ")";
        }
      } else if (is("category")) {
        if (w.category.present) throw SourceError(t.pos, "second category block");
        next();
        w.category = quiver(true);
        w.category.pos = t.pos;
      } else if (is("algebra")) {
        if (w.algebra) throw SourceError(t.pos, "second algebra block");
        next();
        w.algebra = quiver(false);
        w.algebra->pos = t.pos;
      } else if (is("rep")) {
        next();
        auto r = rep();
        r.pos = t.pos;
        if (w.rep(r.name) || w.mor(r.name)) throw SourceError(t.pos, "duplicate name " + r.name);
        w.reps.push_back(std::move(r));
      } else if (is("mor")) {
        next();
        auto m = mor();
        m.pos = t.pos;
        if (w.rep(m.name) || w.mor(m.name)) throw SourceError(t.pos, "duplicate name " + m.name);
        w.mors.push_back(std::move(m));
      } else {
        fail({"field", "category", "algebra", "rep", "mor"});
      }
    }
    if (!w.category.present) throw SourceError(peek().pos, "missing category block");
    for (const auto& m : w.mors)
      for (const auto& n : {m.src, m.tgt})
        if (!w.rep(n)) throw SourceError(m.pos, "mor " + m.name + ": no rep named " + n);
    return w;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  bool at_end() const { return peek().kind == Tok::End; }
  Token next() { return toks_[i_++]; }
  bool is(const std::string& s) const { return peek().kind != Tok::End && peek().text == s; }
  bool accept(const std::string& s) {
    if (!is(s)) return false;
    ++i_;
    return true;
  }
  [[noreturn]] void fail(std::vector<std::string> exp) const {
    for (auto& e : exp) e = "'" + e + "'";
    throw ParseError(peek().pos, exp, peek().show());
  }
  [[noreturn]] void fail_kind(const std::string& what) const { throw ParseError(peek().pos, {what}, peek().show()); }
  void expect(const std::string& s) {
    if (!accept(s)) fail({s});
  }
  void expect_word(std::vector<std::string> words) {
    for (const auto& w : words)
      if (accept(w)) return;
    fail(words);
  }
  std::string ident() {
    if (peek().kind != Tok::Ident) fail_kind("identifier");
    return next().text;
  }
  int integer() {
    if (peek().kind != Tok::Int) fail_kind("integer");
    return std::stoi(next().text);
  }
  int sint() {
    const bool neg = accept("-");
    const int v = integer();
    return neg ? -v : v;
  }
  std::string obj() {
    if (peek().kind == Tok::Ident) return next().text;
    if (accept("(")) {
      const int x = sint();
      expect(",");
      const int y = sint();
      expect(")");
      return za3_label(x, y);
    }
    if (peek().kind == Tok::Int || is("-")) return std::to_string(sint());
    fail_kind("object");
  }
  mpq_class rational() {
    const bool neg = accept("-");
    if (peek().kind != Tok::Int) fail_kind("number");
    mpq_class q(next().text);
    if (accept("/")) {
      auto d = peek();
      const int den = integer();
      if (den == 0) throw SourceError(d.pos, "zero denominator");
      q /= den;
    }
    q.canonicalize();
    return neg ? mpq_class(-q) : q;
  }

  QuiverDecl quiver(bool category) {
    QuiverDecl q;
    q.present = true;
    expect("{");
    while (!accept("}")) {
      const auto pos = peek().pos;
      if (category && accept("kind")) {
        expect("=");
        if (accept("finite")) {
          q.kind = "finite";
        } else if (accept("linear")) {
          q.kind = "linear";
        } else if (accept("nlinear")) {
          q.kind = "nlinear";
          q.param = parameter("N");
        } else if (accept("cyclic")) {
          q.kind = "cyclic";
          q.param = parameter("m");
        } else if (accept("za3")) {
          q.kind = "za3";
        } else {
          fail({"finite", "linear", "nlinear", "cyclic", "za3"});
        }
      } else if (accept("objects")) {
        expect("=");
        q.objects.push_back(obj());
        while (accept(",")) q.objects.push_back(obj());
      } else if (accept("arrow")) {
        ArrowDecl a;
        a.pos = pos;
        a.name = ident();
        expect(":");
        a.src = obj();
        expect("->");
        a.tgt = obj();
        q.arrows.push_back(std::move(a));
      } else if (accept("relation")) {
        expect("=");
        auto r = sum();
        r.pos = pos;
        q.relations.push_back(std::move(r));
      } else if (category && accept("omit")) {
        expect("=");
        q.omit.push_back(obj());
        while (accept(",")) q.omit.push_back(obj());
      } else if (category && accept("window")) {
        expect("=");
        const int lo = sint();
        expect("..");
        const int hi = sint();
        q.window = std::make_pair(lo, hi);
      } else if (category) {
        fail({"kind", "objects", "arrow", "relation", "omit", "window", "}"});
      } else {
        fail({"objects", "arrow", "relation", "}"});
      }
    }
    return q;
  }

  int parameter(const std::string& name) {
    expect("(");
    if (accept(name)) expect("=");
    const int v = integer();
    expect(")");
    return v;
  }

  RelationDecl sum() {
    RelationDecl r;
    bool neg = accept("-");
    for (;;) {
      TermDecl t;
      mpq_class c(1);
      if (peek().kind == Tok::Int) {
        c = rational();
        accept("*");
      }
      if (neg) c = -c;
      t.coeff = c.get_str();
      t.path.push_back(ident());
      while (accept(";")) t.path.push_back(ident());
      r.terms.push_back(std::move(t));
      if (accept("+"))
        neg = false;
      else if (accept("-"))
        neg = true;
      else
        break;
    }
    return r;
  }

  MatrixDecl matrix() {
    MatrixDecl m;
    expect("[");
    if (accept("]")) return m;
    do {
      std::vector<std::string> row;
      expect("[");
      if (!accept("]")) {
        do row.push_back(rational().get_str());
        while (accept(","));
        expect("]");
      }
      if (!m.empty() && row.size() != m[0].size()) throw SourceError(peek().pos, "matrix rows differ in length");
      m.push_back(std::move(row));
    } while (accept(","));
    expect("]");
    return m;
  }

  RepDecl rep() {
    RepDecl r;
    r.name = ident();
    if (accept("=")) {
      if (accept("stalk"))
        r.form = "stalk";
      else if (accept("proj"))
        r.form = "proj";
      else if (accept("inj"))
        r.form = "inj";
      else
        fail({"stalk", "proj", "inj"});
      expect("(");
      r.at = obj();
      if (accept(",")) {
        if (accept("A")) {
          r.module = "A";
        } else {
          expect_word({"A", "S"});
          expect("(");
          r.module = obj();
          expect(")");
        }
      }
      expect(")");
      return r;
    }
    expect("{");
    while (!accept("}")) {
      const auto pos = peek().pos;
      if (accept("at")) {
        auto o = obj();
        expect(":");
        if (accept("dim")) {
          DimDecl d{o, {}, pos};
          if (accept("(")) {
            do d.dims.push_back(static_cast<std::size_t>(integer()));
            while (accept(","));
            expect(")");
          } else {
            d.dims.push_back(static_cast<std::size_t>(integer()));
          }
          r.dims.push_back(std::move(d));
        } else if (peek().kind == Tok::Ident) {
          ActionDecl a{o, next().text, {}, pos};
          expect("=");
          a.m = matrix();
          r.actions.push_back(std::move(a));
        } else {
          fail({"dim", "algebra arrow"});
        }
      } else if (peek().kind == Tok::Ident) {
        MapDecl m{next().text, {}, pos};
        if (accept("@")) m.arrow += "@" + obj();
        expect(":");
        m.m = matrix();
        r.maps.push_back(std::move(m));
      } else {
        fail({"at", "arrow label", "}"});
      }
    }
    return r;
  }

  MorDecl mor() {
    MorDecl m;
    m.name = ident();
    expect(":");
    m.src = ident();
    expect("->");
    m.tgt = ident();
    if (accept("=")) {
      if (accept("id"))
        m.form = "id";
      else if (accept("zero"))
        m.form = "zero";
      else
        fail({"id", "zero"});
      return m;
    }
    expect("{");
    while (!accept("}")) {
      const auto pos = peek().pos;
      expect("at");
      CompDecl c;
      c.pos = pos;
      c.obj = obj();
      expect(":");
      c.m = matrix();
      m.comps.push_back(std::move(c));
    }
    return m;
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

inline Workspace parse(const std::string& src) { return Parser(src).workspace(); }

// --- printer -----------------------------------------------------------------

namespace detail {

inline std::string matrix_text(const MatrixDecl& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    s += i ? ", [" : "[";
    for (std::size_t j = 0; j < m[i].size(); ++j) s += (j ? ", " : "") + m[i][j];
    s += "]";
  }
  return s + "]";
}

inline std::string relation_text(const RelationDecl& r) {
  std::string s;
  for (std::size_t k = 0; k < r.terms.size(); ++k) {
    const auto& t = r.terms[k];
    mpq_class c(t.coeff);
    const bool neg = sgn(c) < 0;
    if (neg) c = -c;
    if (k == 0)
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    if (c != 1) s += c.get_str() + " ";
    for (std::size_t i = 0; i < t.path.size(); ++i) s += (i ? ";" : "") + t.path[i];
  }
  return s;
}

inline void quiver_text(std::ostringstream& o, const QuiverDecl& q, bool category) {
  if (category) {
    o << "  kind = " << q.kind;
    if (q.kind == "nlinear") o << "(N=" << q.param << ")";
    if (q.kind == "cyclic") o << "(m=" << q.param << ")";
    o << "\n";
  }
  if (!q.objects.empty()) {
    o << "  objects = ";
    for (std::size_t i = 0; i < q.objects.size(); ++i) o << (i ? ", " : "") << q.objects[i];
    o << "\n";
  }
  for (const auto& a : q.arrows) o << "  arrow " << a.name << ": " << a.src << " -> " << a.tgt << "\n";
  for (const auto& r : q.relations) o << "  relation = " << relation_text(r) << "\n";
  if (!q.omit.empty()) {
    o << "  omit = ";
    for (std::size_t i = 0; i < q.omit.size(); ++i) o << (i ? ", " : "") << q.omit[i];
    o << "\n";
  }
  if (q.window) o << "  window = " << q.window->first << ".." << q.window->second << "\n";
}

}  // namespace detail

/// Canonical text of a workspace; parse(print(w)) == w.
inline std::string print(const Workspace& w) {
  std::ostringstream o;
  if (w.field) o << "field = " << *w.field << "\n";
  o << "category {\n";
  detail::quiver_text(o, w.category, true);
  o << "}\n";
  if (w.algebra) {
    o << "algebra {\n";
    detail::quiver_text(o, *w.algebra, false);
    o << "}\n";
  }
  for (const auto& r : w.reps) {
    o << "rep " << r.name;
    if (r.form != "block") {
      o << " = " << r.form << "(" << r.at;
      if (r.module != "A") o << ", S(" << r.module << ")";
      o << ")\n";
      continue;
    }
    o << " {\n";
    for (const auto& d : r.dims) {
      o << "  at " << d.obj << ": dim ";
      if (d.dims.size() == 1) {
        o << d.dims[0];
      } else {
        o << "(";
        for (std::size_t i = 0; i < d.dims.size(); ++i) o << (i ? ", " : "") << d.dims[i];
        o << ")";
      }
      o << "\n";
    }
    for (const auto& a : r.actions) o << "  at " << a.obj << ": " << a.arrow << " = " << detail::matrix_text(a.m) << "\n";
    for (const auto& m : r.maps) o << "  " << m.arrow << ": " << detail::matrix_text(m.m) << "\n";
    o << "}\n";
  }
  for (const auto& m : w.mors) {
    o << "mor " << m.name << ": " << m.src << " -> " << m.tgt;
    if (m.form != "block") {
      o << " = " << m.form << "\n";
      continue;
    }
    o << " {\n";
    for (const auto& c : m.comps) o << "  at " << c.obj << ": " << detail::matrix_text(c.m) << "\n";
    o << "}\n";
  }
  return o.str();
}

// --- realization -------------------------------------------------------------

/// First coordinates of every object the workspace mentions, for window
/// padding on infinite kinds.
inline std::vector<int> mentioned_coords(const Workspace& w) {
  std::vector<int> out;
  auto add = [&](const std::string& label) {
    if (label.empty()) return;
    try {
      std::size_t used = 0;
      const auto& s = label[0] == '(' ? label.substr(1) : label;
      const int v = std::stoi(s, &used);
      out.push_back(v);
    } catch (const std::exception&) {
    }
  };
  for (const auto& r : w.reps) {
    add(r.at);
    for (const auto& d : r.dims) add(d.obj);
    for (const auto& a : r.actions) add(a.obj);
    for (const auto& m : r.maps) {
      auto at = m.arrow.find('@');
      if (at != std::string::npos) add(m.arrow.substr(at + 1));
    }
  }
  for (const auto& m : w.mors)
    for (const auto& c : m.comps) add(c.obj);
  return out;
}

/// A workspace realized over a field on a fixed window.
template <class F>
class Realized {
 public:
  Realized(const F& field, const Workspace& w, int lo, int hi) : field_(field), ws_(w), lo_(lo), hi_(hi) {
    try {
      Q_ = build_category(field, w.category.spec(), lo, hi);
      auto A = w.algebra ? build_category(field, w.algebra->spec()) : build_category(field, field_algebra());
      qa_ = std::make_unique<QA<F>>(Q_, A);
    } catch (const AdmissibilityError& e) {
      throw SourceError(w.algebra && std::string(e.what()).find("coefficient") != std::string::npos ? w.algebra->pos
                                                                                                      : w.category.pos,
                        e.what());
    }
    for (const auto& r : w.reps) reps_[r.name] = realize_rep(r);
    for (const auto& m : w.mors) mors_.emplace(m.name, realize_mor(m));
  }
  Realized(const Realized&) = delete;

  const F& field() const { return field_; }
  const Workspace& workspace() const { return ws_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  const std::shared_ptr<const KCategory<F>>& Q() const { return Q_; }
  const QA<F>& qa() const { return *qa_; }

  RepPtr<F> rep(const std::string& n) const {
    auto it = reps_.find(n);
    if (it == reps_.end()) throw std::invalid_argument("no rep named " + n);
    return it->second;
  }
  const RepMorphism<F>& mor(const std::string& n) const {
    auto it = mors_.find(n);
    if (it == mors_.end()) throw std::invalid_argument("no mor named " + n);
    return it->second;
  }

  std::size_t object(const std::string& label, Pos pos) const {
    auto o = Q_->find(label);
    if (!o) throw SourceError(pos, "object " + label + " is not in the window " + window_text());
    return *o;
  }

 private:
  std::string window_text() const {
    if (!ws_.category.infinite()) return "(finite category)";
    return std::to_string(lo_) + ".." + std::to_string(hi_);
  }

  Matrix<F> matrix(const MatrixDecl& m, std::size_t rows, std::size_t cols, Pos pos) const {
    const std::size_t r = m.size(), c = m.empty() ? 0 : m[0].size();
    if (!(r == rows && c == cols) && !(r == 0 && (rows == 0 || cols == 0)))
      throw SourceError(pos, "matrix is " + std::to_string(r) + "x" + std::to_string(c) + ", expected " +
                                 std::to_string(rows) + "x" + std::to_string(cols));
    Matrix<F> out(field_, rows, cols);
    try {
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) out(i, j) = field_.from_rational(mpq_class(m[i][j]));
    } catch (const ArithmeticError& e) {
      throw SourceError(pos, e.what());
    }
    return out;
  }

  /// Split a block-diagonal matrix over the A-vertices.
  std::vector<Matrix<F>> split(const Matrix<F>& m, const std::vector<std::size_t>& rows,
                               const std::vector<std::size_t>& cols, Pos pos) const {
    std::vector<Matrix<F>> out;
    std::size_t ro = 0, co = 0;
    for (std::size_t v = 0; v < rows.size(); ++v) {
      out.push_back(m.block(ro, co, rows[v], cols[v]));
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
          const bool inside = i >= ro && i < ro + rows[v];
          const bool here = j >= co && j < co + cols[v];
          if (here && !inside && !is_zero(m(i, j)))
            throw SourceError(pos, "matrix mixes vertices of the coefficient algebra");
        }
      ro += rows[v];
      co += cols[v];
    }
    return out;
  }

  RepPtr<F> module(const std::string& which, Pos pos) const {
    const auto& A = qa_->A();
    if (which == "A") return qa_->regular_module();
    auto v = A.find(which);
    if (!v) throw SourceError(pos, "the coefficient algebra has no vertex " + which);
    std::vector<std::size_t> dims(A.size(), 0);
    dims[*v] = 1;
    std::vector<Matrix<F>> maps;
    for (const auto& ar : A.arrows()) maps.emplace_back(field_, dims[ar.tgt], dims[ar.src]);
    return std::make_shared<const Representation<F>>(qa_->A_ptr(), dims, std::move(maps));
  }

  RepPtr<F> realize_rep(const RepDecl& r) const {
    const auto& Q = *Q_;
    const auto& A = qa_->A();
    const auto nA = qa_->nA();
    try {
      if (r.form != "block") {
        const auto q = object(r.at, r.pos);
        auto M = module(r.module, r.pos);
        if (r.form == "stalk") return qa_->stalk(q, M);
        if (r.form == "proj") return qa_->proj_rep(q, M);
        auto sd = find_serre(Q);
        if (!std::holds_alternative<SerreData<F>>(sd)) throw SourceError(r.pos, "inj needs a Serre functor");
        return qa_->inj_rep(std::get<SerreData<F>>(sd), q, M);
      }
      std::vector<std::vector<std::size_t>> dims(Q.size(), std::vector<std::size_t>(nA, 0));
      std::vector<bool> seen(Q.size(), false);
      for (const auto& d : r.dims) {
        const auto q = object(d.obj, d.pos);
        if (seen[q]) throw SourceError(d.pos, "dimension at " + d.obj + " given twice");
        seen[q] = true;
        if (d.dims.size() != nA)
          throw SourceError(d.pos, "expected " + std::to_string(nA) + " dimension(s), one per algebra vertex");
        dims[q] = d.dims;
      }
      std::vector<std::vector<Matrix<F>>> actions(Q.size());
      for (std::size_t q = 0; q < Q.size(); ++q)
        for (const auto& ar : A.arrows()) actions[q].emplace_back(field_, dims[q][ar.tgt], dims[q][ar.src]);
      for (const auto& a : r.actions) {
        const auto q = object(a.obj, a.pos);
        std::optional<std::size_t> al;
        for (std::size_t k = 0; k < A.arrows().size(); ++k)
          if (A.arrows()[k].label == a.arrow) al = k;
        if (!al) throw SourceError(a.pos, "the coefficient algebra has no arrow " + a.arrow);
        const auto& ar = A.arrows()[*al];
        actions[q][*al] = matrix(a.m, dims[q][ar.tgt], dims[q][ar.src], a.pos);
      }
      std::vector<RepPtr<F>> values;
      for (std::size_t q = 0; q < Q.size(); ++q) {
        try {
          values.push_back(make_rep(qa_->A_ptr(), dims[q], actions[q]));
        } catch (const RelationError& e) {
          throw SourceError(r.pos, "value at " + Q.label(q) + ": " + e.what());
        }
      }
      std::vector<std::vector<Matrix<F>>> qmaps;
      for (const auto& ar : Q.arrows()) {
        std::vector<Matrix<F>> ms;
        for (std::size_t v = 0; v < nA; ++v) ms.emplace_back(field_, dims[ar.tgt][v], dims[ar.src][v]);
        qmaps.push_back(std::move(ms));
      }
      std::vector<bool> given(Q.arrows().size(), false);
      for (const auto& m : r.maps) {
        std::optional<std::size_t> a;
        for (std::size_t k = 0; k < Q.arrows().size(); ++k)
          if (Q.arrows()[k].label == m.arrow) a = k;
        if (!a) throw SourceError(m.pos, "no arrow " + m.arrow + " in the window " + window_text());
        if (given[*a]) throw SourceError(m.pos, "arrow " + m.arrow + " given twice");
        given[*a] = true;
        const auto& ar = Q.arrows()[*a];
        std::size_t rows = 0, cols = 0;
        for (std::size_t v = 0; v < nA; ++v) {
          rows += dims[ar.tgt][v];
          cols += dims[ar.src][v];
        }
        qmaps[*a] = split(matrix(m.m, rows, cols, m.pos), dims[ar.tgt], dims[ar.src], m.pos);
      }
      try {
        auto x = qa_->assemble(values, qmaps);
        for (std::size_t a = 0; a < Q.arrows().size(); ++a) {
          auto f = qa_->q_arrow_map(x, a);
          if (auto err = f.naturality_error())
            throw SourceError(r.pos, "map " + Q.arrows()[a].label + " is not A-linear: " + *err);
        }
        return x;
      } catch (const RelationError& e) {
        throw SourceError(r.pos, "rep " + r.name + ": " + e.what());
      }
    } catch (const WindowError& e) {
      throw SourceError(r.pos, e.what());
    } catch (const std::invalid_argument& e) {
      throw SourceError(r.pos, e.what());
    }
  }

  RepMorphism<F> realize_mor(const MorDecl& m) const {
    auto x = reps_.at(m.src), y = reps_.at(m.tgt);
    if (m.form == "id") {
      if (m.src != m.tgt) throw SourceError(m.pos, "id needs equal source and target");
      return identity_morphism(x);
    }
    auto f = zero_morphism(x, y);
    if (m.form == "zero") return f;
    const auto nA = qa_->nA();
    std::vector<bool> seen(Q_->size(), false);
    for (const auto& c : m.comps) {
      const auto q = object(c.obj, c.pos);
      if (seen[q]) throw SourceError(c.pos, "component at " + c.obj + " given twice");
      seen[q] = true;
      std::vector<std::size_t> rows, cols;
      for (std::size_t v = 0; v < nA; ++v) {
        rows.push_back(y->dim(qa_->obj(q, v)));
        cols.push_back(x->dim(qa_->obj(q, v)));
      }
      std::size_t R = 0, C = 0;
      for (std::size_t v = 0; v < nA; ++v) {
        R += rows[v];
        C += cols[v];
      }
      auto blocks = split(matrix(c.m, R, C, c.pos), rows, cols, c.pos);
      for (std::size_t v = 0; v < nA; ++v) f.comps[qa_->obj(q, v)] = blocks[v];
    }
    if (auto err = f.naturality_error()) throw SourceError(m.pos, "mor " + m.name + " is not natural: " + *err);
    return f;
  }

  F field_;
  Workspace ws_;
  int lo_, hi_;
  std::shared_ptr<const KCategory<F>> Q_;
  std::unique_ptr<QA<F>> qa_;
  std::map<std::string, RepPtr<F>> reps_;
  std::map<std::string, RepMorphism<F>> mors_;
};

}  // namespace qshape::dsl
