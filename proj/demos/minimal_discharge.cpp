// Smallest useful example: a 1C constant-current discharge with default
// parameters, printing a coarse voltage trace.

#include <cstdio>

#include "vssd/vssd.hpp"

int main() {
  vssd::SimulationConfig cfg;
  cfg.rate_c = 1.0;
  cfg.direction = "discharge";
  cfg.sample_every = 300.0;  // one sample every five minutes

  auto run = vssd::run_simulation(cfg);
  std::printf("   t [s]    I [A/m2]     V [V]      soc\n");
  for (const auto& s : run.samples)
    std::printf("%8.1f  %10.4f  %8.5f  %7.4f\n", s.t, s.current, s.voltage, s.soc);
  std::printf("final soc %.4f after %.0f s (%ld corrections, wall %.2f s)\n",
              run.summary.final_soc, run.summary.t_final,
              run.summary.corrections, run.summary.wall_seconds);
  return 0;
}
