#ifndef PFEPI_ERRORS_HPP
#define PFEPI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pfepi {

// Bad configuration values or malformed CLI usage (exit code 1).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (exit code 2).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All particles became incompatible with an observation (exit code 3).
struct FilterDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] inline void invariant_failure(const char* what, const char* file, int line)
{
    throw std::logic_error(std::string("invariant violated at ") + file + ":" +
                           std::to_string(line) + ": " + what);
}

} // namespace pfepi

// Always-on invariant check; not compiled out by NDEBUG.
#define PFEPI_CHECK(cond, what)                                  \
    do {                                                         \
        if (!(cond))                                             \
            ::pfepi::invariant_failure(what, __FILE__, __LINE__); \
    } while (0)

#endif
