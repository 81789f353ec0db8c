// Text syntax for signal and symbol expressions: a shared tokenizer and
// recursive-descent parser producing a generic parse tree, lowered to the
// typed ASTs, plus canonical pretty printers (parse-of-print is identity).

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "gmla/signal_expr.hpp"
#include "gmla/symbol_expr.hpp"

namespace gmla {

namespace {

std::string fmtNum(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct Token {
  enum Type { Num, Ident, Str, Sym, End } type = End;
  double num = 0.0;
  std::string text;
  char sym = 0;
  size_t off = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) { advance(); }
  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    tok_ = Token{};
    tok_.off = pos_;
    if (pos_ >= s_.size()) {
      tok_.type = Token::End;
      return;
    }
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos_ + 1 < s_.size() &&
         std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))) {
      const char* b = s_.data() + pos_;
      const char* e = s_.data() + s_.size();
      double v = 0.0;
      auto res = std::from_chars(b, e, v);
      if (res.ec != std::errc{})
        throw ParseError("malformed number", pos_);
      tok_.type = Token::Num;
      tok_.num = v;
      pos_ = res.ptr - s_.data();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t b = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
              s_[pos_] == '_'))
        ++pos_;
      tok_.type = Token::Ident;
      tok_.text = s_.substr(b, pos_ - b);
      return;
    }
    if (c == '"') {
      size_t b = ++pos_;
      while (pos_ < s_.size() && s_[pos_] != '"') ++pos_;
      if (pos_ >= s_.size())
        throw ParseError("unterminated string literal", b - 1);
      tok_.type = Token::Str;
      tok_.text = s_.substr(b, pos_ - b);
      ++pos_;
      return;
    }
    if (std::string("+-*^(),").find(c) != std::string::npos) {
      tok_.type = Token::Sym;
      tok_.sym = c;
      ++pos_;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  const std::string& s_;
  size_t pos_ = 0;
  Token tok_;
};

// Generic parse tree, lowered per expression kind.
struct PNode {
  enum Type { Num, Str, Call, Sum, Prod, Pow } type = Num;
  double num = 0.0;
  std::string name;  // Call name or Str payload
  std::vector<PNode> kids;
  int ipow = 0;  // Pow exponent
  size_t off = 0;
};

class Parser {
 public:
  explicit Parser(const std::string& s) : lex_(s) {}

  PNode parse() {
    PNode e = expr();
    if (lex_.peek().type != Token::End)
      throw ParseError("trailing input after expression", lex_.peek().off);
    return e;
  }

 private:
  PNode expr() {
    PNode lhs = term();
    std::vector<PNode> terms;
    terms.push_back(std::move(lhs));
    while (lex_.peek().type == Token::Sym &&
           (lex_.peek().sym == '+' || lex_.peek().sym == '-')) {
      Token op = lex_.take();
      PNode rhs = term();
      if (op.sym == '-') rhs = negate(std::move(rhs), op.off);
      terms.push_back(std::move(rhs));
    }
    if (terms.size() == 1) return std::move(terms[0]);
    PNode s;
    s.type = PNode::Sum;
    s.off = terms[0].off;
    s.kids = std::move(terms);
    return s;
  }

  PNode term() {
    PNode lhs = unary();
    std::vector<PNode> factors;
    factors.push_back(std::move(lhs));
    while (lex_.peek().type == Token::Sym && lex_.peek().sym == '*') {
      lex_.take();
      factors.push_back(unary());
    }
    if (factors.size() == 1) return std::move(factors[0]);
    PNode p;
    p.type = PNode::Prod;
    p.off = factors[0].off;
    p.kids = std::move(factors);
    return p;
  }

  PNode unary() {
    if (lex_.peek().type == Token::Sym && lex_.peek().sym == '-') {
      Token op = lex_.take();
      return negate(unary(), op.off);
    }
    return factor();
  }

  static PNode negate(PNode n, size_t off) {
    if (n.type == PNode::Num) {
      n.num = -n.num;
      return n;
    }
    PNode m1;
    m1.type = PNode::Num;
    m1.num = -1.0;
    m1.off = off;
    PNode p;
    p.type = PNode::Prod;
    p.off = off;
    p.kids.push_back(std::move(m1));
    p.kids.push_back(std::move(n));
    return p;
  }

  PNode factor() {
    PNode base = atom();
    if (lex_.peek().type == Token::Sym && lex_.peek().sym == '^') {
      lex_.take();
      int sign = 1;
      if (lex_.peek().type == Token::Sym && lex_.peek().sym == '-') {
        lex_.take();
        sign = -1;
      }
      Token t = lex_.take();
      if (t.type != Token::Num || t.num != std::floor(t.num))
        throw ParseError("exponent must be an integer literal", t.off);
      PNode p;
      p.type = PNode::Pow;
      p.off = base.off;
      p.ipow = sign * static_cast<int>(t.num);
      p.kids.push_back(std::move(base));
      return p;
    }
    return base;
  }

  PNode atom() {
    Token t = lex_.take();
    if (t.type == Token::Num) {
      PNode n;
      n.type = PNode::Num;
      n.num = t.num;
      n.off = t.off;
      return n;
    }
    if (t.type == Token::Str) {
      PNode n;
      n.type = PNode::Str;
      n.name = t.text;
      n.off = t.off;
      return n;
    }
    if (t.type == Token::Ident) {
      PNode n;
      n.type = PNode::Call;
      n.name = t.text;
      n.off = t.off;
      if (lex_.peek().type == Token::Sym && lex_.peek().sym == '(') {
        lex_.take();
        if (!(lex_.peek().type == Token::Sym && lex_.peek().sym == ')')) {
          n.kids.push_back(expr());
          while (lex_.peek().type == Token::Sym && lex_.peek().sym == ',') {
            lex_.take();
            n.kids.push_back(expr());
          }
        }
        Token close = lex_.take();
        if (!(close.type == Token::Sym && close.sym == ')'))
          throw ParseError("expected ')'", close.off);
      }
      return n;
    }
    if (t.type == Token::Sym && t.sym == '(') {
      PNode e = expr();
      Token close = lex_.take();
      if (!(close.type == Token::Sym && close.sym == ')'))
        throw ParseError("expected ')'", close.off);
      return e;
    }
    throw ParseError("expected an expression", t.off);
  }

  Lexer lex_;
};

double numArg(const PNode& call, size_t i) {
  const PNode& a = call.kids[i];
  if (a.type != PNode::Num)
    throw ParseError("argument of " + call.name + " must be numeric", a.off);
  return a.num;
}

int intArg(const PNode& call, size_t i) {
  double v = numArg(call, i);
  if (v != std::floor(v))
    throw ParseError("argument of " + call.name + " must be an integer",
                     call.kids[i].off);
  return static_cast<int>(v);
}

void checkArity(const PNode& call, size_t n) {
  if (call.kids.size() != n)
    throw ParseError(call.name + " expects " + std::to_string(n) +
                         " argument(s), got " + std::to_string(call.kids.size()),
                     call.off);
}

SignalPtr lowerSignal(const PNode& n) {
  switch (n.type) {
    case PNode::Num:
      return sigConst(Complex(n.num, 0.0));
    case PNode::Str:
      throw ParseError("string literal outside file()", n.off);
    case PNode::Sum: {
      std::vector<SignalPtr> kids;
      for (const auto& k : n.kids) kids.push_back(lowerSignal(k));
      return sigSum(std::move(kids));
    }
    case PNode::Prod: {
      std::vector<SignalPtr> kids;
      for (const auto& k : n.kids) kids.push_back(lowerSignal(k));
      return sigProduct(std::move(kids));
    }
    case PNode::Pow:
      return sigPower(lowerSignal(n.kids[0]), n.ipow);
    case PNode::Call: {
      const std::string& f = n.name;
      if (f == "gauss") {
        checkArity(n, 2);
        return sigGauss(numArg(n, 0), numArg(n, 1));
      }
      if (f == "chirp") {
        checkArity(n, 1);
        return sigChirp(numArg(n, 0));
      }
      if (f == "planewave") {
        checkArity(n, 1);
        return sigPlanewave(numArg(n, 0));
      }
      if (f == "deltaApprox") {
        checkArity(n, 1);
        return sigDeltaApprox(numArg(n, 0));
      }
      if (f == "dirac") {
        checkArity(n, 0);
        return sigDirac();
      }
      if (f == "hermite") {
        checkArity(n, 1);
        int k = intArg(n, 0);
        if (k < 0) throw ParseError("hermite index must be >= 0", n.off);
        return sigHermite(k);
      }
      if (f == "file") {
        checkArity(n, 1);
        if (n.kids[0].type != PNode::Str)
          throw ParseError("file() expects a string path", n.kids[0].off);
        return sigFile(n.kids[0].name);
      }
      throw ParseError("unknown signal primitive '" + f + "'", n.off);
    }
  }
  throw ParseError("internal: bad parse node", n.off);
}

SymPtr lowerSymbol(const PNode& n) {
  switch (n.type) {
    case PNode::Num:
      return symConst(Complex(n.num, 0.0));
    case PNode::Str:
      throw ParseError("string literal not allowed in symbols", n.off);
    case PNode::Sum: {
      std::vector<SymPtr> kids;
      for (const auto& k : n.kids) kids.push_back(lowerSymbol(k));
      return symSum(std::move(kids));
    }
    case PNode::Prod: {
      std::vector<SymPtr> kids;
      for (const auto& k : n.kids) kids.push_back(lowerSymbol(k));
      return symProduct(std::move(kids));
    }
    case PNode::Pow:
      return symPower(lowerSymbol(n.kids[0]), n.ipow);
    case PNode::Call: {
      const std::string& f = n.name;
      if (f == "x") {
        checkArity(n, 0);
        return symX();
      }
      if (f == "xi") {
        checkArity(n, 0);
        return symXi();
      }
      if (f == "bracket") {
        checkArity(n, 1);
        return symBracket(numArg(n, 0));
      }
      if (f == "gaussz") {
        checkArity(n, 0);
        return symGaussZ();
      }
      if (f == "complex") {
        checkArity(n, 2);
        return symConst(Complex(numArg(n, 0), numArg(n, 1)));
      }
      if (f == "coneCutoff") {
        checkArity(n, 5);
        try {
          Cone c = Cone::make(numArg(n, 0), numArg(n, 1), numArg(n, 2));
          return coneCutoffSymbol(c, numArg(n, 3), numArg(n, 4));
        } catch (const std::invalid_argument& e) {
          throw ParseError(e.what(), n.off);
        }
      }
      if (f == "coneSigmoid") {
        checkArity(n, 5);
        try {
          Cone c = Cone::make(numArg(n, 0), numArg(n, 1), numArg(n, 2));
          return coneSigmoidSymbol(c, numArg(n, 3), numArg(n, 4));
        } catch (const std::invalid_argument& e) {
          throw ParseError(e.what(), n.off);
        }
      }
      if (f == "deriv") {
        checkArity(n, 3);
        SymPtr base = lowerSymbol(n.kids[0]);
        if (base->kind != SymbolKind::ConeCutoff)
          throw ParseError("deriv() applies to cone cutoffs only",
                           n.kids[0].off);
        return symDeriv(base, intArg(n, 1), intArg(n, 2));
      }
      throw ParseError("unknown symbol primitive '" + f + "'", n.off);
    }
  }
  throw ParseError("internal: bad parse node", n.off);
}

}  // namespace

SignalPtr parseSignal(const std::string& text) {
  Parser p(text);
  return lowerSignal(p.parse());
}

SymPtr parseSymbol(const std::string& text) {
  Parser p(text);
  return lowerSymbol(p.parse());
}

namespace {

// Printing precedence levels: sum < product < power-base.
enum Prec { PrecSum = 0, PrecProd = 1, PrecAtom = 2 };

std::string printSig(const SignalPtr& e, int prec);

std::string printConstReal(double re, int prec) {
  std::string s = fmtNum(re);
  if (re < 0.0 && prec >= PrecAtom) return "(" + s + ")";
  return s;
}

std::string printSig(const SignalPtr& e, int prec) {
  switch (e->kind) {
    case SignalKind::Const:
      return printConstReal(e->cval.real(), prec);
    case SignalKind::Gauss:
      return "gauss(" + fmtNum(e->p0) + ", " + fmtNum(e->p1) + ")";
    case SignalKind::Chirp:
      return "chirp(" + fmtNum(e->p0) + ")";
    case SignalKind::Planewave:
      return "planewave(" + fmtNum(e->p0) + ")";
    case SignalKind::DeltaApprox:
      return "deltaApprox(" + fmtNum(e->p0) + ")";
    case SignalKind::Dirac:
      return "dirac()";
    case SignalKind::Hermite:
      return "hermite(" + std::to_string(e->k) + ")";
    case SignalKind::File:
      return "file(\"" + e->path + "\")";
    case SignalKind::Sum: {
      std::string s;
      for (size_t i = 0; i < e->kids.size(); ++i) {
        if (i) s += " + ";
        s += printSig(e->kids[i], PrecSum);
      }
      if (prec > PrecSum) return "(" + s + ")";
      return s;
    }
    case SignalKind::Product: {
      std::string s;
      for (size_t i = 0; i < e->kids.size(); ++i) {
        if (i) s += " * ";
        s += printSig(e->kids[i], PrecProd);
      }
      if (prec > PrecProd) return "(" + s + ")";
      return s;
    }
    case SignalKind::Power:
      return printSig(e->kids[0], PrecAtom) + "^" + std::to_string(e->k);
  }
  return "";
}

std::string printSym(const SymPtr& e, int prec) {
  switch (e->kind) {
    case SymbolKind::Const:
      if (e->cval.imag() == 0.0) return printConstReal(e->cval.real(), prec);
      return "complex(" + fmtNum(e->cval.real()) + ", " +
             fmtNum(e->cval.imag()) + ")";
    case SymbolKind::X:
      return "x";
    case SymbolKind::Xi:
      return "xi";
    case SymbolKind::Bracket:
      return "bracket(" + fmtNum(e->m) + ")";
    case SymbolKind::GaussZ:
      return "gaussz";
    case SymbolKind::ConeCutoff: {
      const auto& c = e->cone;
      if (c.profile == ConeProfile::Bump)
        return "coneCutoff(" + fmtNum(c.thetaLo) + ", " + fmtNum(c.thetaHi) +
               ", " + fmtNum(c.R) + ", " + fmtNum(c.wAngle) + ", " +
               fmtNum(c.wRadial) + ")";
      return "coneSigmoid(" + fmtNum(c.thetaLo) + ", " + fmtNum(c.thetaHi) +
             ", " + fmtNum(c.R) + ", " + fmtNum(c.wRadial) + ", " +
             fmtNum(c.lambda) + ")";
    }
    case SymbolKind::Sum: {
      std::string s;
      for (size_t i = 0; i < e->kids.size(); ++i) {
        if (i) s += " + ";
        s += printSym(e->kids[i], PrecSum);
      }
      if (prec > PrecSum) return "(" + s + ")";
      return s;
    }
    case SymbolKind::Product: {
      std::string s;
      for (size_t i = 0; i < e->kids.size(); ++i) {
        if (i) s += " * ";
        s += printSym(e->kids[i], PrecProd);
      }
      if (prec > PrecProd) return "(" + s + ")";
      return s;
    }
    case SymbolKind::Power:
      return printSym(e->kids[0], PrecAtom) + "^" + std::to_string(e->ipow);
    case SymbolKind::Deriv:
      return "deriv(" + printSym(e->kids[0], PrecSum) + ", " +
             std::to_string(e->ax) + ", " + std::to_string(e->axi) + ")";
  }
  return "";
}

}  // namespace

std::string prettyPrint(const SignalPtr& e) { return printSig(e, PrecSum); }
std::string prettyPrint(const SymPtr& e) { return printSym(e, PrecSum); }

bool equal(const SignalPtr& a, const SignalPtr& b) {
  if (a->kind != b->kind) return false;
  if (a->cval != b->cval || a->p0 != b->p0 || a->p1 != b->p1 || a->k != b->k ||
      a->path != b->path)
    return false;
  if (a->kids.size() != b->kids.size()) return false;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (!equal(a->kids[i], b->kids[i])) return false;
  return true;
}

bool equal(const SymPtr& a, const SymPtr& b) {
  if (a->kind != b->kind) return false;
  if (a->cval != b->cval || a->m != b->m || a->ipow != b->ipow ||
      a->ax != b->ax || a->axi != b->axi)
    return false;
  const auto& ca = a->cone;
  const auto& cb = b->cone;
  if (a->kind == SymbolKind::ConeCutoff &&
      (ca.thetaLo != cb.thetaLo || ca.thetaHi != cb.thetaHi ||
       ca.R != cb.R || ca.wAngle != cb.wAngle || ca.wRadial != cb.wRadial ||
       ca.profile != cb.profile || ca.lambda != cb.lambda))
    return false;
  if (a->kids.size() != b->kids.size()) return false;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (!equal(a->kids[i], b->kids[i])) return false;
  return true;
}

}  // namespace gmla
