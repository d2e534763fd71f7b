#ifndef PLAYLEARN_ERROR_HPP
#define PLAYLEARN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace playlearn {

/// Base for all contract violations raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace playlearn

#endif  // PLAYLEARN_ERROR_HPP
