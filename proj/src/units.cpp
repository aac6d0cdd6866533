#include "qgdecoh/units.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <system_error>

#include "qgdecoh/errors.hpp"

namespace qgdecoh {

std::string Dimension::to_string() const {
  if (dimensionless()) return "1";
  std::string out;
  auto term = [&out](const char* sym, int e) {
    if (e == 0) return;
    if (!out.empty()) out += ' ';
    out += sym;
    if (e != 1) out += '^' + std::to_string(e);
  };
  term("kg", mass);
  term("m", length);
  term("s", time);
  return out;
}

namespace {

Quantity checked(double v, Dimension d, const char* op) {
  if (!std::isfinite(v))
    throw NumericError(std::string("non-finite result in quantity ") + op);
  return Quantity(v, d);
}

void require_same(const Quantity& a, const Quantity& b, const char* op) {
  if (a.dimension() != b.dimension())
    throw DimensionError(std::string("dimension mismatch in ") + op + ": [" +
                         a.dimension().to_string() + "] vs [" +
                         b.dimension().to_string() + "]");
}

}  // namespace

Quantity::Quantity(double value, Dimension d) : value_(value), dim_(d) {
  if (!std::isfinite(value)) throw InputError("quantity value must be finite");
}

double Quantity::in(Dimension expected, const char* what) const {
  if (dim_ != expected)
    throw DimensionError(std::string(what) + " has dimension [" +
                         dim_.to_string() + "], expected [" +
                         expected.to_string() + "]");
  return value_;
}

Quantity Quantity::pow(int n) const {
  return checked(std::pow(value_, n), dim_.pow(n), "power");
}

Quantity operator*(const Quantity& a, const Quantity& b) {
  return checked(a.value_ * b.value_, a.dim_ * b.dim_, "multiplication");
}

Quantity operator/(const Quantity& a, const Quantity& b) {
  return checked(a.value_ / b.value_, a.dim_ / b.dim_, "division");
}

Quantity operator+(const Quantity& a, const Quantity& b) {
  require_same(a, b, "addition");
  return checked(a.value_ + b.value_, a.dim_, "addition");
}

Quantity operator-(const Quantity& a, const Quantity& b) {
  require_same(a, b, "subtraction");
  return checked(a.value_ - b.value_, a.dim_, "subtraction");
}

std::partial_ordering operator<=>(const Quantity& a, const Quantity& b) {
  require_same(a, b, "comparison");
  return a.value_ <=> b.value_;
}

bool operator==(const Quantity& a, const Quantity& b) {
  require_same(a, b, "comparison");
  return a.value_ == b.value_;
}

std::string Quantity::to_string() const {
  std::string s = format_round_trip(value_);
  if (!dim_.dimensionless()) s += ' ' + dim_.to_string();
  return s;
}

void PhysicalConstants::validate() const {
  struct Entry {
    const char* name;
    const Quantity& q;
    Dimension d;
  };
  const Entry entries[] = {{"c", c, dim::velocity},
                           {"hbar", hbar, dim::action},
                           {"m_planck", m_planck, dim::mass},
                           {"m_nucleon", m_nucleon, dim::mass},
                           {"amu", amu, dim::mass}};
  for (const auto& e : entries) {
    if (e.q.in(e.d, e.name) <= 0.0)
      throw InputError(std::string("constant ") + e.name + " must be positive");
  }
}

std::string format_round_trip(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double parse_double(const std::string& text) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last || !std::isfinite(v))
    throw InputError("not a finite number: '" + text + "'");
  return v;
}

}  // namespace qgdecoh
