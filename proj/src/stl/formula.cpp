#include "drivebound/stl/formula.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "drivebound/common/error.hpp"

namespace drivebound::stl {

char light_code(Light l) {
  switch (l) {
    case Light::Green: return 'G';
    case Light::Yellow: return 'Y';
    case Light::Red: return 'R';
  }
  return '?';
}

std::optional<Light> light_from_code(char c) {
  switch (c) {
    case 'G': return Light::Green;
    case 'Y': return Light::Yellow;
    case 'R': return Light::Red;
    default: return std::nullopt;
  }
}

std::string_view cmp_text(Cmp c) {
  switch (c) {
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
    case Cmp::Gt: return ">";
    case Cmp::Ge: return ">=";
    case Cmp::Eq: return "==";
  }
  return "?";
}

struct Formula::Node {
  Kind kind;
  // Pred payload
  std::string signal;
  Cmp cmp = Cmp::Lt;
  Rhs rhs{0.0};
  // Interval payload
  double lo = 0.0;
  double hi = 0.0;
  // Children
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

void check_interval(double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi)) throw Error("interval bound is NaN");
  if (lo < 0.0) throw Error("negative interval bound");
  if (!(lo <= hi)) throw Error("inverted interval");
  if (std::isinf(lo)) throw Error("interval lower bound must be finite");
}

}  // namespace

Formula Formula::truth() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::True;
  return Formula(std::move(n));
}

Formula Formula::pred(std::string signal, Cmp cmp, Rhs rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pred;
  n->signal = std::move(signal);
  n->cmp = cmp;
  n->rhs = std::move(rhs);
  return Formula(std::move(n));
}

Formula Formula::negation(Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->a = std::move(f.node_);
  return Formula(std::move(n));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->a = std::move(lhs.node_);
  n->b = std::move(rhs.node_);
  return Formula(std::move(n));
}

Formula Formula::disj(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->a = std::move(lhs.node_);
  n->b = std::move(rhs.node_);
  return Formula(std::move(n));
}

Formula Formula::implies(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Implies;
  n->a = std::move(lhs.node_);
  n->b = std::move(rhs.node_);
  return Formula(std::move(n));
}

Formula Formula::until(double lo, double hi, Formula lhs, Formula rhs) {
  check_interval(lo, hi);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Until;
  n->lo = lo;
  n->hi = hi;
  n->a = std::move(lhs.node_);
  n->b = std::move(rhs.node_);
  return Formula(std::move(n));
}

Formula Formula::always(double lo, double hi, Formula f) {
  check_interval(lo, hi);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Always;
  n->lo = lo;
  n->hi = hi;
  n->a = std::move(f.node_);
  return Formula(std::move(n));
}

Formula Formula::eventually(double lo, double hi, Formula f) {
  check_interval(lo, hi);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Eventually;
  n->lo = lo;
  n->hi = hi;
  n->a = std::move(f.node_);
  return Formula(std::move(n));
}

Formula::Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::signal() const { return node_->signal; }
Cmp Formula::cmp() const { return node_->cmp; }
const Rhs& Formula::rhs() const { return node_->rhs; }
double Formula::lo() const { return node_->lo; }
double Formula::hi() const { return node_->hi; }

Formula Formula::child() const { return Formula(node_->a); }
Formula Formula::left() const { return Formula(node_->a); }
Formula Formula::right() const { return Formula(node_->b); }

namespace {

void collect_params(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::True:
      break;
    case Formula::Kind::Pred:
      if (f.rhs().is_parameter()) out.insert(f.rhs().parameter_name());
      break;
    case Formula::Kind::Not:
    case Formula::Kind::Always:
    case Formula::Kind::Eventually:
      collect_params(f.child(), out);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Until:
      collect_params(f.left(), out);
      collect_params(f.right(), out);
      break;
  }
}

}  // namespace

std::set<std::string> Formula::parameters() const {
  std::set<std::string> out;
  collect_params(*this, out);
  return out;
}

Formula Formula::substitute(const Bindings& bindings) const {
  switch (kind()) {
    case Kind::True:
      return *this;
    case Kind::Pred:
      if (rhs().is_parameter()) {
        auto it = bindings.find(rhs().parameter_name());
        if (it != bindings.end()) return pred(signal(), cmp(), Rhs::number(it->second));
      }
      return *this;
    case Kind::Not:
      return negation(child().substitute(bindings));
    case Kind::And:
      return conj(left().substitute(bindings), right().substitute(bindings));
    case Kind::Or:
      return disj(left().substitute(bindings), right().substitute(bindings));
    case Kind::Implies:
      return implies(left().substitute(bindings), right().substitute(bindings));
    case Kind::Until:
      return until(lo(), hi(), left().substitute(bindings), right().substitute(bindings));
    case Kind::Always:
      return always(lo(), hi(), child().substitute(bindings));
    case Kind::Eventually:
      return eventually(lo(), hi(), child().substitute(bindings));
  }
  throw Error("corrupt formula node");
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

namespace {

std::string interval_text(double lo, double hi) {
  return "[" + format_number(lo) + "," + format_number(hi) + "]";
}

std::string rhs_text(const Rhs& r) {
  if (r.is_number()) return format_number(r.number_value());
  if (r.is_parameter()) return r.parameter_name();
  return std::string(1, light_code(r.label_value()));
}

// Every composite prints fully parenthesized so round-tripping never depends
// on precedence.
std::string body_text(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True:
      return "true";
    case Formula::Kind::Pred:
      return "(" + f.signal() + " " + std::string(cmp_text(f.cmp())) + " " + rhs_text(f.rhs()) +
             ")";
    case Formula::Kind::Not:
      return "not " + body_text(f.child());
    case Formula::Kind::And:
      return "(" + body_text(f.left()) + " and " + body_text(f.right()) + ")";
    case Formula::Kind::Or:
      return "(" + body_text(f.left()) + " or " + body_text(f.right()) + ")";
    case Formula::Kind::Implies:
      return "(" + body_text(f.left()) + " => " + body_text(f.right()) + ")";
    case Formula::Kind::Until:
      return "(" + body_text(f.left()) + " until_" + interval_text(f.lo(), f.hi()) + " " +
             body_text(f.right()) + ")";
    case Formula::Kind::Always:
      return "alw_" + interval_text(f.lo(), f.hi()) + " " + body_text(f.child());
    case Formula::Kind::Eventually:
      return "ev_" + interval_text(f.lo(), f.hi()) + " " + body_text(f.child());
  }
  throw Error("corrupt formula node");
}

}  // namespace

std::string Formula::str() const {
  std::string out;
  auto params = parameters();
  if (!params.empty()) {
    out += "param ";
    bool first = true;
    for (const auto& p : params) {
      if (!first) out += ", ";
      out += p;
      first = false;
    }
    out += "; ";
  }
  out += body_text(*this);
  return out;
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::True:
      return true;
    case Kind::Pred:
      return signal() == other.signal() && cmp() == other.cmp() && rhs() == other.rhs();
    case Kind::Not:
      return child() == other.child();
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
      return left() == other.left() && right() == other.right();
    case Kind::Until:
      return lo() == other.lo() && hi() == other.hi() && left() == other.left() &&
             right() == other.right();
    case Kind::Always:
    case Kind::Eventually:
      return lo() == other.lo() && hi() == other.hi() && child() == other.child();
  }
  return false;
}

}  // namespace drivebound::stl
