#include "bpcc/guard.hpp"

#include <cctype>
#include <optional>

namespace bpcc {

namespace {

struct Token {
  enum class Type { Ident, Number, String, Op, LParen, RParen, End };
  Type type;
  std::string text;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_ws();
    if (pos_ >= src_.size()) return {Token::Type::End, ""};
    char c = src_[pos_];
    if (c == '(') { ++pos_; return {Token::Type::LParen, "("}; }
    if (c == ')') { ++pos_; return {Token::Type::RParen, ")"}; }
    if (c == '\'' || c == '"') return lex_string(c);
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+') return lex_number();
    if (is_op_char(c)) return lex_op();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_ident();
    fail(Errc::ConfigInvalid, "guard: unexpected character '" + std::string(1, c) + "'");
  }

private:
  static bool is_op_char(char c) { return c == '=' || c == '!' || c == '<' || c == '>'; }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  Token lex_string(char quote) {
    ++pos_;
    std::string out;
    while (pos_ < src_.size() && src_[pos_] != quote) out.push_back(src_[pos_++]);
    if (pos_ >= src_.size()) fail(Errc::ConfigInvalid, "guard: unterminated string literal");
    ++pos_;
    return {Token::Type::String, out};
  }

  Token lex_number() {
    size_t start = pos_;
    if (src_[pos_] == '-' || src_[pos_] == '+') ++pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    return {Token::Type::Number, std::string(src_.substr(start, pos_ - start))};
  }

  Token lex_op() {
    size_t start = pos_;
    while (pos_ < src_.size() && is_op_char(src_[pos_])) ++pos_;
    return {Token::Type::Op, std::string(src_.substr(start, pos_ - start))};
  }

  Token lex_ident() {
    size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                  src_[pos_] == '_' || src_[pos_] == '.'))
      ++pos_;
    return {Token::Type::Ident, std::string(src_.substr(start, pos_ - start))};
  }

  std::string_view src_;
  size_t pos_ = 0;
};

} // namespace

class GuardParser {
public:
  explicit GuardParser(std::string_view src) : lexer_(src) { advance(); }

  GuardExpr parse_expr() {
    GuardExpr lhs = parse_term();
    while (cur_.type == Token::Type::Ident && cur_.text == "or") {
      advance();
      GuardExpr node;
      node.kind_ = GuardExpr::Kind::Or;
      node.kids_.push_back(std::move(lhs));
      node.kids_.push_back(parse_term());
      lhs = std::move(node);
    }
    return lhs;
  }

  void expect_end() {
    if (cur_.type != Token::Type::End)
      fail(Errc::ConfigInvalid, "guard: trailing input at '" + cur_.text + "'");
  }

private:
  GuardExpr parse_term() {
    GuardExpr lhs = parse_factor();
    while (cur_.type == Token::Type::Ident && cur_.text == "and") {
      advance();
      GuardExpr node;
      node.kind_ = GuardExpr::Kind::And;
      node.kids_.push_back(std::move(lhs));
      node.kids_.push_back(parse_factor());
      lhs = std::move(node);
    }
    return lhs;
  }

  GuardExpr parse_factor() {
    if (cur_.type == Token::Type::Ident && cur_.text == "not") {
      advance();
      GuardExpr node;
      node.kind_ = GuardExpr::Kind::Not;
      node.kids_.push_back(parse_factor());
      return node;
    }
    if (cur_.type == Token::Type::LParen) {
      advance();
      GuardExpr inner = parse_expr();
      if (cur_.type != Token::Type::RParen) fail(Errc::ConfigInvalid, "guard: expected ')'");
      advance();
      return inner;
    }
    if (cur_.type == Token::Type::Ident && (cur_.text == "true" || cur_.text == "false")) {
      GuardExpr node = GuardExpr::literal(cur_.text == "true");
      advance();
      return node;
    }
    if (cur_.type == Token::Type::Ident) return parse_cmp();
    fail(Errc::ConfigInvalid, "guard: unexpected token '" + cur_.text + "'");
  }

  GuardExpr parse_cmp() {
    GuardExpr node;
    node.kind_ = GuardExpr::Kind::Cmp;
    node.field_ = cur_.text;
    advance();
    if (cur_.type != Token::Type::Op)
      fail(Errc::ConfigInvalid, "guard: expected comparison operator after '" + node.field_ + "'");
    const std::string& op = cur_.text;
    if (op == "=" || op == "==") node.op_ = GuardExpr::CmpOp::Eq;
    else if (op == "!=") node.op_ = GuardExpr::CmpOp::Ne;
    else if (op == "<") node.op_ = GuardExpr::CmpOp::Lt;
    else if (op == "<=") node.op_ = GuardExpr::CmpOp::Le;
    else if (op == ">") node.op_ = GuardExpr::CmpOp::Gt;
    else if (op == ">=") node.op_ = GuardExpr::CmpOp::Ge;
    else fail(Errc::ConfigInvalid, "guard: unknown operator '" + op + "'");
    advance();
    if (cur_.type == Token::Type::Number) {
      node.rhs_ = nlohmann::json::parse(cur_.text);
    } else if (cur_.type == Token::Type::String) {
      node.rhs_ = cur_.text;
    } else if (cur_.type == Token::Type::Ident && (cur_.text == "true" || cur_.text == "false")) {
      node.rhs_ = (cur_.text == "true");
    } else {
      fail(Errc::ConfigInvalid, "guard: expected literal after operator");
    }
    advance();
    return node;
  }

  void advance() { cur_ = lexer_.next(); }

  Lexer lexer_;
  Token cur_{Token::Type::End, ""};
};

GuardExpr GuardExpr::parse(std::string_view text) {
  GuardParser p(text);
  GuardExpr e = p.parse_expr();
  p.expect_end();
  return e;
}

GuardExpr GuardExpr::literal(bool value) {
  GuardExpr e;
  e.kind_ = value ? Kind::True : Kind::False;
  return e;
}

namespace {

int compare_json(const nlohmann::json& a, const nlohmann::json& b, const std::string& field) {
  if (a.is_number() && b.is_number()) {
    double x = a.get<double>(), y = b.get<double>();
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  if (a.is_string() && b.is_string()) {
    const auto& x = a.get_ref<const std::string&>();
    const auto& y = b.get_ref<const std::string&>();
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  if (a.is_boolean() && b.is_boolean())
    return static_cast<int>(a.get<bool>()) - static_cast<int>(b.get<bool>());
  fail(Errc::GuardEvaluation, "field '" + field + "' type mismatch in comparison");
}

} // namespace

bool GuardExpr::eval(const Payload& payload) const {
  switch (kind_) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Not: return !kids_[0].eval(payload);
    case Kind::And: return kids_[0].eval(payload) && kids_[1].eval(payload);
    case Kind::Or: return kids_[0].eval(payload) || kids_[1].eval(payload);
    case Kind::Cmp: {
      if (!payload.is_object() || !payload.contains(field_))
        fail(Errc::GuardEvaluation, "missing payload field '" + field_ + "'");
      int c = compare_json(payload.at(field_), rhs_, field_);
      switch (op_) {
        case CmpOp::Eq: return c == 0;
        case CmpOp::Ne: return c != 0;
        case CmpOp::Lt: return c < 0;
        case CmpOp::Le: return c <= 0;
        case CmpOp::Gt: return c > 0;
        case CmpOp::Ge: return c >= 0;
      }
    }
  }
  fail(Errc::GuardEvaluation, "corrupt guard expression");
}

std::string GuardExpr::text() const {
  switch (kind_) {
    case Kind::True: return "true";
    case Kind::False: return "false";
    case Kind::Not: return "not (" + kids_[0].text() + ")";
    case Kind::And: return "(" + kids_[0].text() + " and " + kids_[1].text() + ")";
    case Kind::Or: return "(" + kids_[0].text() + " or " + kids_[1].text() + ")";
    case Kind::Cmp: {
      const char* op = "==";
      switch (op_) {
        case CmpOp::Eq: op = "=="; break;
        case CmpOp::Ne: op = "!="; break;
        case CmpOp::Lt: op = "<"; break;
        case CmpOp::Le: op = "<="; break;
        case CmpOp::Gt: op = ">"; break;
        case CmpOp::Ge: op = ">="; break;
      }
      std::string rhs = rhs_.is_string() ? "'" + rhs_.get<std::string>() + "'" : rhs_.dump();
      return field_ + " " + op + " " + rhs;
    }
  }
  return "true";
}

} // namespace bpcc
