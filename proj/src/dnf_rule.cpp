#include "pretopomd/dnf_rule.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>

#include <fmt/format.h>

#include "pretopomd/error.hpp"

namespace pretopomd {

RuleExpression RuleExpression::var(std::string name) {
  return RuleExpression(Kind::Var, std::move(name), {});
}

RuleExpression RuleExpression::all_of(std::vector<RuleExpression> children) {
  if (children.size() < 2) {
    throw Error(Errc::InvalidArgument, "AND needs at least two operands");
  }
  return RuleExpression(Kind::And, {}, std::move(children));
}

RuleExpression RuleExpression::any_of(std::vector<RuleExpression> children) {
  if (children.size() < 2) {
    throw Error(Errc::InvalidArgument, "OR needs at least two operands");
  }
  return RuleExpression(Kind::Or, {}, std::move(children));
}

std::vector<std::string> RuleExpression::variables() const {
  std::set<std::string> names;
  std::vector<const RuleExpression*> stack{this};
  while (!stack.empty()) {
    const auto* node = stack.back();
    stack.pop_back();
    if (node->kind_ == Kind::Var) names.insert(node->name_);
    for (const auto& child : node->children_) stack.push_back(&child);
  }
  return {names.begin(), names.end()};
}

namespace {

enum class Tok { Ident, And, Or, Not, LParen, RParen, End };

struct Token {
  Tok type;
  std::string_view text;
  std::size_t pos;
};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::toupper(static_cast<unsigned char>(x)) ==
                  std::toupper(static_cast<unsigned char>(y));
         });
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) { advance(); }

  RuleExpression parse() {
    if (current_.type == Tok::End) {
      throw Error(Errc::EmptyInput, "rule text is empty");
    }
    auto expr = parse_expr();
    if (current_.type != Tok::End) {
      throw RuleSyntaxError(current_.pos, "AND, OR or end of input");
    }
    return expr;
  }

private:
  RuleExpression parse_expr() {
    std::vector<RuleExpression> terms;
    terms.push_back(parse_term());
    while (current_.type == Tok::Or) {
      advance();
      terms.push_back(parse_term());
    }
    if (terms.size() == 1) return std::move(terms.front());
    return RuleExpression::any_of(std::move(terms));
  }

  RuleExpression parse_term() {
    std::vector<RuleExpression> factors;
    factors.push_back(parse_factor());
    while (current_.type == Tok::And) {
      advance();
      factors.push_back(parse_factor());
    }
    if (factors.size() == 1) return std::move(factors.front());
    return RuleExpression::all_of(std::move(factors));
  }

  RuleExpression parse_factor() {
    switch (current_.type) {
      case Tok::Ident: {
        auto expr = RuleExpression::var(std::string(current_.text));
        advance();
        return expr;
      }
      case Tok::LParen: {
        advance();
        auto expr = parse_expr();
        if (current_.type != Tok::RParen) {
          throw RuleSyntaxError(current_.pos, "')'");
        }
        advance();
        return expr;
      }
      case Tok::Not:
        throw Error(Errc::NegationUnsupported,
                    fmt::format("negation at position {} is not allowed in "
                                "a positive rule",
                                current_.pos));
      default:
        throw RuleSyntaxError(current_.pos, "identifier or '('");
    }
  }

  void advance() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (pos_ == text_.size()) {
      current_ = {Tok::End, {}, pos_};
      return;
    }
    const std::size_t start = pos_;
    const char c = text_[pos_];
    if (c == '(' || c == ')') {
      ++pos_;
      current_ = {c == '(' ? Tok::LParen : Tok::RParen,
                  text_.substr(start, 1), start};
      return;
    }
    if (!ident_start(c)) {
      throw RuleSyntaxError(start, "identifier, '(' or ')'");
    }
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    const auto word = text_.substr(start, pos_ - start);
    Tok type = Tok::Ident;
    if (iequals(word, "AND")) type = Tok::And;
    else if (iequals(word, "OR")) type = Tok::Or;
    else if (iequals(word, "NOT")) type = Tok::Not;
    current_ = {type, word, start};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_{Tok::End, {}, 0};
};

void format_into(const RuleExpression& expr, std::string& out) {
  using Kind = RuleExpression::Kind;
  if (expr.kind() == Kind::Var) {
    out += expr.name();
    return;
  }
  const bool is_and = expr.kind() == Kind::And;
  bool first = true;
  for (const auto& child : expr.children()) {
    if (!first) out += is_and ? " AND " : " OR ";
    first = false;
    // An AND child of an OR is the only compound child that parses back
    // without parentheses.
    const bool bare = child.kind() == Kind::Var ||
                      (!is_and && child.kind() == Kind::And);
    if (bare) {
      format_into(child, out);
    } else {
      out += '(';
      format_into(child, out);
      out += ')';
    }
  }
}

}  // namespace

RuleExpression parse_rule(std::string_view text) {
  return Parser(text).parse();
}

bool evaluate(const RuleExpression& expr, const TruthAssignment& assignment) {
  switch (expr.kind()) {
    case RuleExpression::Kind::Var: {
      const auto it = assignment.find(expr.name());
      if (it == assignment.end()) {
        throw Error(Errc::UnboundVariable, expr.name());
      }
      return it->second;
    }
    case RuleExpression::Kind::And:
      return std::all_of(expr.children().begin(), expr.children().end(),
                         [&](const auto& c) { return evaluate(c, assignment); });
    case RuleExpression::Kind::Or:
      return std::any_of(expr.children().begin(), expr.children().end(),
                         [&](const auto& c) { return evaluate(c, assignment); });
  }
  return false;
}

std::string format_rule(const RuleExpression& expr) {
  std::string out;
  format_into(expr, out);
  return out;
}

BoundRule::BoundRule(const RuleExpression& expr,
                     std::span<const std::string> names)
    : variable_count_(names.size()) {
  flatten(expr, names);
}

std::size_t BoundRule::flatten(const RuleExpression& expr,
                               std::span<const std::string> names) {
  const std::size_t id = nodes_.size();
  nodes_.push_back({expr.kind()});
  if (expr.kind() == RuleExpression::Kind::Var) {
    const auto it = std::find(names.begin(), names.end(), expr.name());
    if (it == names.end()) {
      throw Error(Errc::UnknownPrenetworkInRule,
                  fmt::format("rule references undeclared prenetwork '{}'",
                              expr.name()));
    }
    nodes_[id].var = static_cast<std::size_t>(it - names.begin());
    return id;
  }
  std::vector<std::size_t> kids;
  for (const auto& child : expr.children()) kids.push_back(flatten(child, names));
  nodes_[id].first = child_index_.size();
  nodes_[id].count = kids.size();
  child_index_.insert(child_index_.end(), kids.begin(), kids.end());
  return id;
}

}  // namespace pretopomd
