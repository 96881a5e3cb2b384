#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "skillmatch/errors.hpp"
#include "skillmatch/model.hpp"

namespace skillmatch {

/// Closed-form steady-state quantities of the two-server system in which
/// type 1 customers can use either server and type 2 only server 2.
/// Suffix r is redundancy service, q is FCFS-ALIS.
struct NsystemReport {
  double EW1r = 0, EW2r = 0;  ///< expected sojourn times under redundancy
  double B = 0;               ///< normalizing constant of the FCFS-ALIS chain
  double EV1q = 0, EV2q = 0;  ///< expected waiting times before service
  double b1q = 0, b2q = 0;    ///< P(server 1 busy), P(server 2 busy)
  double ES1q = 0, ES2q = 0;  ///< expected service times
  double ENr_total = 0, ENq_total = 0;
};

/// ENq_total counts waiting customers through Little's law on V and
/// customers in service through the busy probabilities b1q + b2q.
inline NsystemReport nsystem_closed_forms(double l1, double l2, double m1, double m2) {
  for (double r : {l1, l2, m1, m2})
    if (!(r > 0.0) || !std::isfinite(r)) throw InputError("N-system rates must be positive and finite");
  if (!strictly_less(l2, m2) || !strictly_less(l1 + l2, m1 + m2))
    throw DivergenceError("N-system is unstable: need lambda2 < mu2 and lambda1 + lambda2 < mu1 + mu2");
  const double d = m1 + m2 - l1 - l2;  // total spare capacity
  const double e = m2 - l2;            // spare capacity of server 2 alone
  const double l = l1 + l2;
  NsystemReport r;
  r.EW1r = 1.0 / d;
  r.EW2r = 1.0 / e - 1.0 / (m1 + m2 - l2) + 1.0 / d;
  r.B = 1.0 / (1.0 / (l1 * l) + 1.0 / (l * l) + 1.0 / (m1 * l) + 1.0 / (l1 * e) + 1.0 / (m1 * d) + 1.0 / (e * d));
  r.EV1q = r.B / (d * d) * (1.0 / m1 + 1.0 / e);
  r.EV2q = r.B * (1.0 / (l1 * e * e) + 1.0 / (m1 * d * d) + 1.0 / (e * e * d) + 1.0 / (e * d * d));
  r.b1q = r.B * (1.0 / (m1 * l) + 1.0 / (m1 * d) + 1.0 / (e * d));
  r.b2q = r.B * (1.0 / (e * l1) + 1.0 / (m1 * d) + 1.0 / (e * d));
  const double helping = r.b2q - l2 / m2;  // P(server 2 serves a type 1 customer)
  const double rate1 = m1 * r.b1q + m2 * helping;
  r.ES1q = r.b1q / rate1 + helping / rate1;
  r.ES2q = 1.0 / m2;
  r.ENr_total = l1 * r.EW1r + l2 * r.EW2r;
  r.ENq_total = l1 * (r.EV1q + r.ES1q) + l2 * (r.EV2q + r.ES2q);
  return r;
}

/// Expected number in system when each type is served only by its own
/// server: two independent M/M/1 queues.
inline std::pair<double, double> nsystem_dedicated(double l1, double l2, double m1, double m2) {
  if (!strictly_less(l1, m1) || !strictly_less(l2, m2)) throw DivergenceError("dedicated queues are unstable");
  return {l1 / (m1 - l1), l2 / (m2 - l2)};
}

struct NsystemGridPoint {
  double rho1 = 0, rho2 = 0, theta = 0;
  double l1 = 0, l2 = 0, m1 = 0, m2 = 0;
  double ENr_total = 0, ENq_total = 0;
  double difference = 0;  ///< ENr_total - ENq_total
};

/// Grid over rho1 = l1/m1, rho2 = l2/m2 and theta = m1/m2 with m2 = 1.
inline std::vector<NsystemGridPoint> nsystem_sweep(const std::vector<double>& rhos, const std::vector<double>& thetas) {
  std::vector<NsystemGridPoint> out;
  for (double theta : thetas) {
    for (double r1 : rhos) {
      for (double r2 : rhos) {
        NsystemGridPoint g;
        g.rho1 = r1;
        g.rho2 = r2;
        g.theta = theta;
        g.m2 = 1.0;
        g.m1 = theta;
        g.l1 = r1 * theta;
        g.l2 = r2;
        const auto rep = nsystem_closed_forms(g.l1, g.l2, g.m1, g.m2);
        g.ENr_total = rep.ENr_total;
        g.ENq_total = rep.ENq_total;
        g.difference = rep.ENr_total - rep.ENq_total;
        out.push_back(g);
      }
    }
  }
  return out;
}

/// rho values 0.1, 0.2, ..., 0.9 and theta in {0.5, 1, 2}.
inline std::vector<NsystemGridPoint> nsystem_default_sweep() {
  std::vector<double> rhos;
  for (int k = 1; k <= 9; ++k) rhos.push_back(k / 10.0);
  return nsystem_sweep(rhos, {0.5, 1.0, 2.0});
}

}  // namespace skillmatch
