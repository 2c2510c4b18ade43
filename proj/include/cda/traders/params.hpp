#pragma once

#include "cda/types.hpp"

namespace cda::traders {

struct ZipParams {
  double beta_lo{0.1};
  double beta_hi{0.5};
  double momentum{0.3};
  double r_up_hi{1.05};    // raise targets: R ~ U[1, r_up_hi]
  double r_down_lo{0.95};  // lower targets: R ~ U[r_down_lo, 1]
  double a_abs{0.05};      // currency; A ~ U[0, a_abs]
  double margin_lo{0.05};
  double margin_hi{0.35};
};

struct AsadParams {
  int short_window{5};
  int long_window{20};
  double k{2.0};
  double reset_factor{0.5};  // margin multiplier applied on a detected shock
};

struct GdxParams {
  int window{30};        // shouts remembered
  double gamma{0.9};
  int horizon{10};       // quote opportunities budgeted per day
  Ticks grid_pad{5};     // ticks beyond the touch explored by the grid
  double prior{0.5};     // belief with an empty history
};

enum class AaVariant : std::uint8_t { Classic, Micro };

struct AaParams {
  double beta1{0.5};
  double beta2{0.05};
  double theta_min{-8.0};
  double theta_max{2.0};
  double theta0{-2.0};
  int vol_window{20};
  double ewma_decay{0.9};
  double lambda_r{0.05};
  double lambda_a{0.05};  // currency
  double eta{3.0};
  double r0_spread{0.3};  // initial r ~ U[-r0_spread, 0]
  double gamma_theta{2.0};
};

struct StrategyParams {
  ZipParams zip;
  AsadParams asad;
  GdxParams gdx;
  AaParams aa;
};

}  // namespace cda::traders
