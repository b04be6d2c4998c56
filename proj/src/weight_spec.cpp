#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "polyweight/errors.hpp"
#include "polyweight/weights.hpp"

namespace polyweight::weights {

namespace {

// Grammar:
//   spec    := term ( '*' term )*
//   term    := 'one' | 'omega(' family ',' g ')' | 'jacobi(' num ',' num ')'
//   family  := 'pow:' num | 'powlog:' num ':' num | 'exppow:' num
//   g       := 'sin' | 'cos' | 'sinshift:' num | 'sincos'
struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  explicit Parser(const std::string& str) : s(str) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) throw ParseError(std::string("expected '") + c + "'", pos);
  }
  bool eat_word(const char* w) {
    skip_ws();
    std::size_t n = std::string(w).size();
    if (s.compare(pos, n, w) == 0) {
      pos += n;
      return true;
    }
    return false;
  }
  double number() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' ||
            s[pos] == '-' || s[pos] == '+' || s[pos] == 'e' || s[pos] == 'E'))
      ++pos;
    double v = 0;
    auto res = std::from_chars(s.data() + start, s.data() + pos, v);
    if (res.ec != std::errc() || start == pos)
      throw ParseError("expected a number", start);
    return v;
  }
};

}  // namespace

CompositeWeight parse_weight_spec(const std::string& spec) {
  Parser p(spec);
  CompositeWeight w;
  bool have_u = false;
  while (true) {
    p.skip_ws();
    if (p.eat_word("omega")) {
      p.expect('(');
      FSpec f;
      if (p.eat_word("powlog")) {
        p.expect(':');
        f.family = FFamily::PowerLog;
        f.alpha = p.number();
        p.expect(':');
        f.xi1 = p.number();
      } else if (p.eat_word("pow")) {
        p.expect(':');
        f.family = FFamily::Power;
        f.alpha = p.number();
      } else if (p.eat_word("exppow")) {
        p.expect(':');
        f.family = FFamily::ExpPower;
        f.alpha = p.number();
      } else {
        throw ParseError("unknown F family (pow | powlog | exppow)", p.pos);
      }
      if (!(f.alpha > 0)) throw ParseError("alpha must be positive", p.pos);
      p.expect(',');
      GSpec g;
      if (p.eat_word("sinshift")) {
        p.expect(':');
        g.kind = GKind::SinShift;
        g.theta = p.number();
      } else if (p.eat_word("sincos")) {
        g.kind = GKind::ProductSinCos;
      } else if (p.eat_word("sin")) {
        g.kind = GKind::Sin;
      } else if (p.eat_word("cos")) {
        g.kind = GKind::Cos;
      } else {
        throw ParseError("unknown g (sin | cos | sinshift | sincos)", p.pos);
      }
      p.expect(')');
      f.cap = g.bound();
      w.add_omega(OmegaWeight(f, g));
    } else if (p.eat_word("jacobi")) {
      if (have_u) throw ParseError("at most one jacobi/one factor", p.pos);
      have_u = true;
      p.expect('(');
      double gamma = p.number();
      p.expect(',');
      double theta = p.number();
      p.expect(')');
      if (!(gamma > -1)) throw ParseError("jacobi gamma must be > -1", p.pos);
      if (gamma != 0) w.add_jacobi({gamma, theta});
    } else if (p.eat_word("one")) {
      if (have_u) throw ParseError("at most one jacobi/one factor", p.pos);
      have_u = true;
    } else {
      throw ParseError("expected omega(...), jacobi(...), or one", p.pos);
    }
    p.skip_ws();
    if (p.pos >= spec.size()) break;
    p.expect('*');
  }
  return w;
}

std::string format_weight_spec(const CompositeWeight& w) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  auto sep = [&] {
    if (!first) os << " * ";
    first = false;
  };
  for (const auto& f : w.omega_factors()) {
    sep();
    os << "omega(";
    switch (f.f.family) {
      case FFamily::Power: os << "pow:" << f.f.alpha; break;
      case FFamily::PowerLog: os << "powlog:" << f.f.alpha << ":" << f.f.xi1; break;
      case FFamily::ExpPower: os << "exppow:" << f.f.alpha; break;
    }
    os << ",";
    switch (f.g.kind) {
      case GKind::Sin: os << "sin"; break;
      case GKind::Cos: os << "cos"; break;
      case GKind::SinShift: os << "sinshift:" << f.g.theta; break;
      case GKind::ProductSinCos: os << "sincos"; break;
    }
    os << ")";
  }
  for (const auto& j : w.jacobi_factors()) {
    sep();
    os << "jacobi(" << j.gamma << "," << j.theta << ")";
  }
  if (first) os << "one";
  return os.str();
}

}  // namespace polyweight::weights
