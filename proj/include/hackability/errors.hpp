#pragma once

#include <stdexcept>
#include <string>

namespace hackability {

// Root of every exception this library throws on its own behalf.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};
struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};
struct SetMismatch : Error {
    explicit SetMismatch(const std::string& msg) : Error(msg) {}
};
struct CapExceeded : Error {
    explicit CapExceeded(const std::string& msg) : Error(msg) {}
};
struct NonStochasticRow : Error {
    explicit NonStochasticRow(const std::string& msg) : Error(msg) {}
};
struct UnreachableState : Error {
    explicit UnreachableState(const std::string& msg) : Error(msg) {}
};
struct DiscountOutOfRange : Error {
    explicit DiscountOutOfRange(const std::string& msg) : Error(msg) {}
};
struct TooFewActions : Error {
    explicit TooFewActions(const std::string& msg) : Error(msg) {}
};
struct NoDistinctOccupancies : Error {
    explicit NoDistinctOccupancies(const std::string& msg) : Error(msg) {}
};
struct FilterTooTight : Error {
    explicit FilterTooTight(const std::string& msg) : Error(msg) {}
};
struct NotRepresentable : Error {
    explicit NotRepresentable(const std::string& msg) : Error(msg) {}
};
struct UnknownFormat : Error {
    explicit UnknownFormat(const std::string& msg) : Error(msg) {}
};
// Thrown when an exhaustive search proves that no object with the requested
// properties exists (as opposed to running out of budget, which is CapExceeded).
struct SearchExhausted : Error {
    explicit SearchExhausted(const std::string& msg) : Error(msg) {}
};

}  // namespace hackability
