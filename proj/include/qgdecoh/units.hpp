#pragma once

// Runtime dimension-checked scalars over the three SI base dimensions the
// decoherence model needs (mass, length, time), plus the constant table.

#include <compare>
#include <string>

namespace qgdecoh {

struct Dimension {
  int mass = 0;
  int length = 0;
  int time = 0;

  friend constexpr bool operator==(const Dimension&, const Dimension&) = default;

  friend constexpr Dimension operator*(Dimension a, Dimension b) {
    return {a.mass + b.mass, a.length + b.length, a.time + b.time};
  }
  friend constexpr Dimension operator/(Dimension a, Dimension b) {
    return {a.mass - b.mass, a.length - b.length, a.time - b.time};
  }
  constexpr Dimension pow(int n) const { return {mass * n, length * n, time * n}; }
  constexpr Dimension inverse() const { return {-mass, -length, -time}; }
  constexpr bool dimensionless() const { return mass == 0 && length == 0 && time == 0; }

  // "kg m^2 s^-1", or "1" for dimensionless.
  std::string to_string() const;
};

namespace dim {
inline constexpr Dimension none{0, 0, 0};
inline constexpr Dimension mass{1, 0, 0};
inline constexpr Dimension length{0, 1, 0};
inline constexpr Dimension time{0, 0, 1};
inline constexpr Dimension velocity{0, 1, -1};
inline constexpr Dimension action{1, 2, -1};          // hbar
inline constexpr Dimension wavenumber{0, -1, 0};      // sigma, k
inline constexpr Dimension rate{0, 0, -1};            // s^-1
inline constexpr Dimension localization{0, -2, -1};   // gamma, m^-2 s^-1
}  // namespace dim

class Quantity {
 public:
  // Throws InputError on a non-finite value.
  explicit Quantity(double value, Dimension d = dim::none);

  double value() const noexcept { return value_; }
  Dimension dimension() const noexcept { return dim_; }

  // Returns value() after checking the dimension; throws DimensionError
  // naming `what` otherwise.
  double in(Dimension expected, const char* what = "quantity") const;

  Quantity operator-() const { return Quantity(-value_, dim_); }
  Quantity pow(int n) const;

  friend Quantity operator*(const Quantity& a, const Quantity& b);
  friend Quantity operator/(const Quantity& a, const Quantity& b);
  friend Quantity operator+(const Quantity& a, const Quantity& b);
  friend Quantity operator-(const Quantity& a, const Quantity& b);
  friend Quantity operator*(double s, const Quantity& q) { return Quantity(s) * q; }
  friend Quantity operator*(const Quantity& q, double s) { return q * Quantity(s); }

  // Same-dimension comparison; throws DimensionError on mismatch.
  friend std::partial_ordering operator<=>(const Quantity& a, const Quantity& b);
  friend bool operator==(const Quantity& a, const Quantity& b);

  std::string to_string() const;

 private:
  double value_;
  Dimension dim_;
};

inline Quantity kilograms(double v) { return Quantity(v, dim::mass); }
inline Quantity metres(double v) { return Quantity(v, dim::length); }
inline Quantity seconds(double v) { return Quantity(v, dim::time); }
inline Quantity per_metre(double v) { return Quantity(v, dim::wavenumber); }
inline Quantity hertz(double v) { return Quantity(v, dim::rate); }
inline Quantity localization_rate(double v) { return Quantity(v, dim::localization); }

// CODATA-2018 values. m_nucleon defaults to the proton mass; set it to amu
// to use the atomic mass unit instead.
struct PhysicalConstants {
  Quantity c{2.99792458e8, dim::velocity};
  Quantity hbar{1.054571817e-34, dim::action};
  Quantity m_planck{2.176434e-8, dim::mass};
  Quantity m_nucleon{1.67262192e-27, dim::mass};
  Quantity amu{1.66053907e-27, dim::mass};

  static PhysicalConstants codata2018() { return {}; }

  // Throws InputError unless every constant is positive with its expected
  // dimension.
  void validate() const;
};

// Shortest decimal string that parses back to the identical double.
std::string format_round_trip(double v);
// Strict full-string parse of a finite number; throws InputError on
// trailing garbage, inf or nan.
double parse_double(const std::string& text);

}  // namespace qgdecoh
