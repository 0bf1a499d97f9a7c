#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kgqa {

enum class ErrorKind {
    io,
    config,
    parse,
    mapping,
    template_missing,
    synthesis,
    contract,
    validation,
    spec,
    training,
    metric,
    partition,
    adapter,
    evaluation,
    report,
};

inline std::string_view to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::io: return "io";
        case ErrorKind::config: return "config";
        case ErrorKind::parse: return "parse";
        case ErrorKind::mapping: return "mapping";
        case ErrorKind::template_missing: return "template";
        case ErrorKind::synthesis: return "synthesis";
        case ErrorKind::contract: return "contract";
        case ErrorKind::validation: return "validation";
        case ErrorKind::spec: return "spec";
        case ErrorKind::training: return "training";
        case ErrorKind::metric: return "metric";
        case ErrorKind::partition: return "partition";
        case ErrorKind::adapter: return "adapter";
        case ErrorKind::evaluation: return "evaluation";
        case ErrorKind::report: return "report";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + " error: " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace kgqa
