#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace factlens {

// Root of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller violated an operation's precondition (empty input, bad range, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

// Network failure or timeout that survived the retry budget.
class TransportError : public Error {
public:
    using Error::Error;
};

// Upstream answered, but not usefully (non-2xx, empty body, no canned route).
class ProviderError : public Error {
public:
    using Error::Error;
};

class CacheError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class StatisticsError : public Error {
public:
    using Error::Error;
};

class ExtractionError : public Error {
public:
    ExtractionError(const std::string& what, std::string raw_response)
        : Error(what), raw_(std::move(raw_response)) {}

    const std::string& raw_response() const noexcept { return raw_; }

private:
    std::string raw_;
};

class DecompositionError : public Error {
public:
    using Error::Error;
};

class VerificationError : public Error {
public:
    using Error::Error;
};

// A metric evaluator failed; names the metric so partial reports are never needed.
class EvaluationError : public Error {
public:
    EvaluationError(std::string metric, const std::string& what)
        : Error(metric + ": " + what), metric_(std::move(metric)) {}

    const std::string& metric() const noexcept { return metric_; }

private:
    std::string metric_;
};

class DatasetError : public Error {
public:
    DatasetError(std::size_t line, const std::string& what)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }  // 0 when not tied to a line

private:
    std::size_t line_;
};

} // namespace factlens
