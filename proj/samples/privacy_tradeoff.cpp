// Sweeps the privacy budget for a fixed clipped source and prints both
// corner points of the rate region next to their quotient.

#include <cstdio>

#include "rdfc/rdfc.hpp"

namespace gldp = rdfc::gaussian_ldp;

int main() {
  gldp::GaussianLdpConfig cfg;
  cfg.sigma_x = 0.4938;
  cfg.clip_c = 1.0;
  cfg.delta = 0.05;

  std::printf("sigma_x = %.4f, C = %.1f, delta = %.2f\n\n", cfg.sigma_x,
              cfg.clip_c, cfg.delta);
  std::printf("%8s %12s %12s %8s\n", "epsilon", "wci_lower", "mutual_info",
              "ratio");
  for (double eps : {0.1, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    cfg.epsilon = eps;
    const gldp::GaussianRatePoint rp = gldp::rate_point(cfg);
    std::printf("%8.2f %12.6f %12.6f %8.2f\n", eps, rp.wci_lower,
                rp.mutual_info, rp.wci_lower / rp.mutual_info);
  }
  return 0;
}
