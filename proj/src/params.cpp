#include "playlearn/params.hpp"

#include "playlearn/error.hpp"

namespace playlearn {

void Params::validate() const {
  if (zeta < 0.0 || zeta > 1.0 || zeta_env < 0.0 || zeta_env > 1.0) throw Error("forgetting factor outside [0,1]");
  if (beta < 0.0 || beta > 1.0) throw Error("boredom immunity outside [0,1]");
  if (!(h_init > 0.0) || !(h_init_env > 0.0)) throw Error("initial weights must be positive");
  if (!(r_env > 0.0)) throw Error("environment reward must be positive");
  if (l_max < 2) throw Error("l_max must be at least 2");
  if (t_thresh == 0) throw Error("t_thresh must be positive");
}

}  // namespace playlearn
