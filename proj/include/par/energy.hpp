#pragma once

namespace par {

struct RadioPower {
  double tx{0.0};    // watts
  double rx{0.0};
  double idle{0.0};
};

/// Radio energy in joules; whatever time is not spent sending or receiving
/// counts as idle.
inline double energy_consumed(double tx_seconds, double rx_seconds, double elapsed,
                              const RadioPower& p) {
  const double idle_seconds = elapsed - tx_seconds - rx_seconds;
  return tx_seconds * p.tx + rx_seconds * p.rx + idle_seconds * p.idle;
}

}  // namespace par
