#ifndef MLSM_ERRORS_HPP
#define MLSM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mlsm {

// Numerical breakdown inside an iterative fit; carries the iteration index.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& msg, int iteration)
        : std::runtime_error(msg + " (iteration " + std::to_string(iteration) +
                             ")"),
          iteration_(iteration) {}

    int iteration() const { return iteration_; }

private:
    int iteration_;
};

}  // namespace mlsm

#endif
