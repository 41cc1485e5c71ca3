#pragma once

// Positive boolean rules over prenetwork names, e.g.
// "(Position AND Size) OR (Position AND Shape)".
//
// Grammar (AND binds tighter than OR, keywords case-insensitive):
//   expr   := term (OR term)*
//   term   := factor (AND factor)*
//   factor := IDENT | '(' expr ')'

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pretopomd {

class RuleExpression {
public:
  enum class Kind { Var, And, Or };

  static RuleExpression var(std::string name);
  /// Throws Error(InvalidArgument) with fewer than two children.
  static RuleExpression all_of(std::vector<RuleExpression> children);
  static RuleExpression any_of(std::vector<RuleExpression> children);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] std::span<const RuleExpression> children() const noexcept {
    return children_;
  }

  /// Distinct variable names, sorted.
  [[nodiscard]] std::vector<std::string> variables() const;

  friend bool operator==(const RuleExpression&,
                         const RuleExpression&) = default;

private:
  RuleExpression(Kind kind, std::string name,
                 std::vector<RuleExpression> children)
      : kind_(kind), name_(std::move(name)), children_(std::move(children)) {}

  Kind kind_;
  std::string name_;
  std::vector<RuleExpression> children_;
};

using TruthAssignment = std::map<std::string, bool, std::less<>>;

/// Throws Error(EmptyInput), Error(NegationUnsupported) or RuleSyntaxError.
RuleExpression parse_rule(std::string_view text);

/// Throws Error(UnboundVariable) if a variable is missing from the assignment.
bool evaluate(const RuleExpression& expr, const TruthAssignment& assignment);

/// Canonical text using only the parentheses needed to re-parse to the same
/// tree.
std::string format_rule(const RuleExpression& expr);

/// A rule whose variables are resolved to positions in a list of names,
/// for evaluation in tight loops.
class BoundRule {
public:
  BoundRule() = default;
  /// Throws Error(UnknownPrenetworkInRule) for a variable not in `names`.
  BoundRule(const RuleExpression& expr, std::span<const std::string> names);

  /// `value(i)` yields the truth of variable i; it is called lazily and only
  /// as far as short-circuiting requires.
  template <typename ValueFn>
  [[nodiscard]] bool evaluate(ValueFn&& value) const {
    return eval_node(0, value);
  }

  [[nodiscard]] std::size_t variable_count() const noexcept {
    return variable_count_;
  }

private:
  struct Node {
    RuleExpression::Kind kind;
    std::size_t var = 0;    // Var nodes
    std::size_t first = 0;  // index of first child in child_index_
    std::size_t count = 0;
  };

  std::size_t flatten(const RuleExpression& expr,
                      std::span<const std::string> names);

  template <typename ValueFn>
  bool eval_node(std::size_t id, ValueFn& value) const {
    const Node& node = nodes_[id];
    switch (node.kind) {
      case RuleExpression::Kind::Var:
        return static_cast<bool>(value(node.var));
      case RuleExpression::Kind::And:
        for (std::size_t k = 0; k < node.count; ++k) {
          if (!eval_node(child_index_[node.first + k], value)) return false;
        }
        return true;
      case RuleExpression::Kind::Or:
        for (std::size_t k = 0; k < node.count; ++k) {
          if (eval_node(child_index_[node.first + k], value)) return true;
        }
        return false;
    }
    return false;
  }

  std::vector<Node> nodes_;
  std::vector<std::size_t> child_index_;
  std::size_t variable_count_ = 0;
};

}  // namespace pretopomd
