#pragma once

#include "bpcc/errors.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace bpcc {

using Payload = nlohmann::json;

// Boolean guard over flat payload fields.
//
// Grammar:
//   expr   := term ('or' term)*
//   term   := factor ('and' factor)*
//   factor := 'not' factor | '(' expr ')' | 'true' | 'false' | cmp
//   cmp    := field op literal
//   op     := '==' | '=' | '!=' | '<' | '<=' | '>' | '>='
//   literal:= number | 'quoted string' | true | false
//
// Evaluation is total over the payload: referencing a missing field raises
// GuardEvaluation instead of defaulting to false.
class GuardExpr {
public:
  enum class Kind { True, False, Not, And, Or, Cmp };
  enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

  static GuardExpr parse(std::string_view text);
  static GuardExpr literal(bool value);

  bool eval(const Payload& payload) const;
  bool is_literal_true() const { return kind_ == Kind::True; }

  // Canonical text form; parse(text()) is an identity.
  std::string text() const;

  Kind kind() const { return kind_; }

private:
  Kind kind_ = Kind::True;
  std::vector<GuardExpr> kids_;
  std::string field_;
  CmpOp op_ = CmpOp::Eq;
  nlohmann::json rhs_;

  friend class GuardParser;
};

} // namespace bpcc
