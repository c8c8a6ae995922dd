#ifndef KEYSIM_ERRORS_HPP
#define KEYSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace keysim {

// Invalid parameter or inconsistent configuration.  The CLI maps this to exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A caller broke an operation's input contract (wrong length, non-finite value, ...).
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem-level failure.  The CLI maps this to exit code 3.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed file content; carries the 1-based line where parsing stopped.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

} // namespace keysim

#endif
