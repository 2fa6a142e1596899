#ifndef QOC_ERROR_HPP
#define QOC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qoc {

// All library failures throw this. `code` is a stable machine-readable tag,
// `what()` carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

} // namespace qoc

#endif
