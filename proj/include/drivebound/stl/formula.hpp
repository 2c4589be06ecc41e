#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>

namespace drivebound::stl {

// Discrete traffic-light state.
enum class Light { Green, Yellow, Red };

char light_code(Light l);
std::optional<Light> light_from_code(char c);

enum class Cmp { Lt, Le, Gt, Ge, Eq };

std::string_view cmp_text(Cmp c);

// Right-hand side of a predicate: numeric literal, named parameter, or light label.
struct Rhs {
  std::variant<double, std::string, Light> value;

  static Rhs number(double v) { return Rhs{v}; }
  static Rhs parameter(std::string name) { return Rhs{std::move(name)}; }
  static Rhs label(Light l) { return Rhs{l}; }

  bool is_number() const { return std::holds_alternative<double>(value); }
  bool is_parameter() const { return std::holds_alternative<std::string>(value); }
  bool is_label() const { return std::holds_alternative<Light>(value); }

  double number_value() const { return std::get<double>(value); }
  const std::string& parameter_name() const { return std::get<std::string>(value); }
  Light label_value() const { return std::get<Light>(value); }

  bool operator==(const Rhs&) const = default;
};

using Bindings = std::map<std::string, double>;

// Immutable formula AST with shared structure. Interval bounds must satisfy
// 0 <= lo <= hi (hi may be +inf); violating constructors throw.
class Formula {
 public:
  enum class Kind { True, Pred, Not, And, Or, Implies, Until, Always, Eventually };

  Formula() : Formula(truth()) {}  // default-constructs to ⊤

  static Formula truth();
  static Formula pred(std::string signal, Cmp cmp, Rhs rhs);
  static Formula negation(Formula f);
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula until(double lo, double hi, Formula lhs, Formula rhs);
  static Formula always(double lo, double hi, Formula f);
  static Formula eventually(double lo, double hi, Formula f);

  Kind kind() const;

  // Pred accessors.
  const std::string& signal() const;
  Cmp cmp() const;
  const Rhs& rhs() const;

  // Temporal interval accessors (Until/Always/Eventually).
  double lo() const;
  double hi() const;

  // Child accessors: child() for unary nodes, left()/right() for binary ones.
  Formula child() const;
  Formula left() const;
  Formula right() const;

  // All named parameters appearing in the AST.
  std::set<std::string> parameters() const;

  // Replace bound parameters with numeric literals; unbound ones are kept.
  Formula substitute(const Bindings& bindings) const;

  // Canonical concrete syntax; parse(str()) yields a structurally equal AST.
  std::string str() const;

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Format a double the way Formula::str() does (shortest round-trip form).
std::string format_number(double v);

}  // namespace drivebound::stl
