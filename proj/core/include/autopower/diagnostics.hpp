#pragma once

#include <string>
#include <vector>

namespace autopower {

/// Collects non-fatal findings from training (underdetermined fits, clamped
/// labels, unresolved scaling laws) plus per-sub-model fit summaries for the
/// CLI training report. Deterministic order.
struct TrainDiagnostics {
    struct Note {
        std::string context;
        std::string message;
    };

    std::vector<Note> warnings;
    std::vector<Note> info;

    void warn(std::string context, std::string message) {
        warnings.push_back({std::move(context), std::move(message)});
    }
    void note(std::string context, std::string message) {
        info.push_back({std::move(context), std::move(message)});
    }
    bool has_warning_containing(const std::string& needle) const {
        for (const auto& w : warnings)
            if (w.message.find(needle) != std::string::npos ||
                w.context.find(needle) != std::string::npos)
                return true;
        return false;
    }
};

} // namespace autopower
