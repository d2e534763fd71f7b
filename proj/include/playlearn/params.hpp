#ifndef PLAYLEARN_PARAMS_HPP
#define PLAYLEARN_PARAMS_HPP

#include <cstddef>

namespace playlearn {

/// Free parameters of the learning agent. Defaults are the published values.
struct Params {
  double r_success = 1000.0;
  double r_failure = -30.0;
  double zeta = 0.0;       // forgetting, playing network
  double zeta_env = 0.0;   // forgetting, forward models
  double r_env = 10.0;
  double h_init = 200.0;
  double h_init_env = 1.0;
  double alpha = 25.0;     // stretching factor of the discrimination score
  double beta = 0.8;       // boredom immunity
  double gamma = 0.1;      // squashing scale
  double delta = 0.95;     // squashing shift
  double epsilon = 0.1;    // balancing factor
  std::size_t l_max = 4;
  // Well-trained promotion: mean reward of the last t_thresh rollouts >= r_thresh.
  std::size_t t_thresh = 20;
  double r_thresh = 897.0;

  /// Throws Error if a value is outside its admissible range.
  void validate() const;
};

}  // namespace playlearn

#endif  // PLAYLEARN_PARAMS_HPP
