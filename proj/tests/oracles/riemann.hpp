#pragma once

// Exact solution of the 1D Riemann problem for an ideal gas (Newton
// iteration on the star-region pressure, then self-similar sampling).

#include <cmath>
#include <stdexcept>

namespace oracle {

struct Primitive {
  double rho;
  double u;
  double p;
};

class ExactRiemann {
 public:
  ExactRiemann(Primitive left, Primitive right, double gamma) : L_(left), R_(right), g_(gamma) {
    cL_ = std::sqrt(g_ * L_.p / L_.rho);
    cR_ = std::sqrt(g_ * R_.p / R_.rho);
    solveStar();
  }

  double starPressure() const { return p_star_; }
  double starVelocity() const { return u_star_; }

  /// Speed of the right-moving shock (requires p* > p_R).
  double rightShockSpeed() const {
    const double ratio = p_star_ / R_.p;
    return R_.u + cR_ * std::sqrt((g_ + 1.0) / (2.0 * g_) * ratio + (g_ - 1.0) / (2.0 * g_));
  }

  /// State at similarity coordinate s = x / t.
  Primitive sample(double s) const {
    if (s <= u_star_) return sampleLeft(s);
    return sampleRight(s);
  }

 private:
  double f(double p, const Primitive& K, double c) const {
    if (p > K.p) {
      const double A = 2.0 / ((g_ + 1.0) * K.rho);
      const double B = (g_ - 1.0) / (g_ + 1.0) * K.p;
      return (p - K.p) * std::sqrt(A / (p + B));
    }
    return 2.0 * c / (g_ - 1.0) * (std::pow(p / K.p, (g_ - 1.0) / (2.0 * g_)) - 1.0);
  }
  double df(double p, const Primitive& K, double c) const {
    if (p > K.p) {
      const double A = 2.0 / ((g_ + 1.0) * K.rho);
      const double B = (g_ - 1.0) / (g_ + 1.0) * K.p;
      return std::sqrt(A / (B + p)) * (1.0 - (p - K.p) / (2.0 * (B + p)));
    }
    return 1.0 / (K.rho * c) * std::pow(p / K.p, -(g_ + 1.0) / (2.0 * g_));
  }
  void solveStar() {
    double p = 0.5 * (L_.p + R_.p);
    for (int it = 0; it < 200; ++it) {
      const double F = f(p, L_, cL_) + f(p, R_, cR_) + (R_.u - L_.u);
      const double D = df(p, L_, cL_) + df(p, R_, cR_);
      double next = p - F / D;
      if (next <= 0.0) next = 1e-8 * p;
      if (std::abs(next - p) <= 1e-14 * 0.5 * (next + p)) {
        p = next;
        break;
      }
      p = next;
    }
    p_star_ = p;
    u_star_ = 0.5 * (L_.u + R_.u) + 0.5 * (f(p, R_, cR_) - f(p, L_, cL_));
  }
  Primitive sampleLeft(double s) const {
    if (p_star_ > L_.p) {
      const double r = p_star_ / L_.p;
      const double sL = L_.u - cL_ * std::sqrt((g_ + 1.0) / (2.0 * g_) * r + (g_ - 1.0) / (2.0 * g_));
      if (s <= sL) return L_;
      const double q = (g_ - 1.0) / (g_ + 1.0);
      return {L_.rho * (r + q) / (q * r + 1.0), u_star_, p_star_};
    }
    const double head = L_.u - cL_;
    const double c_star = cL_ * std::pow(p_star_ / L_.p, (g_ - 1.0) / (2.0 * g_));
    const double tail = u_star_ - c_star;
    if (s <= head) return L_;
    if (s >= tail) return {L_.rho * std::pow(p_star_ / L_.p, 1.0 / g_), u_star_, p_star_};
    const double k = 2.0 / (g_ + 1.0) + (g_ - 1.0) / ((g_ + 1.0) * cL_) * (L_.u - s);
    return {L_.rho * std::pow(k, 2.0 / (g_ - 1.0)), 2.0 / (g_ + 1.0) * (cL_ + (g_ - 1.0) / 2.0 * L_.u + s),
            L_.p * std::pow(k, 2.0 * g_ / (g_ - 1.0))};
  }
  Primitive sampleRight(double s) const {
    if (p_star_ > R_.p) {
      const double r = p_star_ / R_.p;
      const double sR = rightShockSpeed();
      if (s >= sR) return R_;
      const double q = (g_ - 1.0) / (g_ + 1.0);
      return {R_.rho * (r + q) / (q * r + 1.0), u_star_, p_star_};
    }
    const double head = R_.u + cR_;
    const double c_star = cR_ * std::pow(p_star_ / R_.p, (g_ - 1.0) / (2.0 * g_));
    const double tail = u_star_ + c_star;
    if (s >= head) return R_;
    if (s <= tail) return {R_.rho * std::pow(p_star_ / R_.p, 1.0 / g_), u_star_, p_star_};
    const double k = 2.0 / (g_ + 1.0) - (g_ - 1.0) / ((g_ + 1.0) * cR_) * (R_.u - s);
    return {R_.rho * std::pow(k, 2.0 / (g_ - 1.0)), 2.0 / (g_ + 1.0) * (-cR_ + (g_ - 1.0) / 2.0 * R_.u + s),
            R_.p * std::pow(k, 2.0 * g_ / (g_ - 1.0))};
  }

  Primitive L_, R_;
  double g_;
  double cL_ = 0.0, cR_ = 0.0;
  double p_star_ = 0.0, u_star_ = 0.0;
};

}  // namespace oracle
