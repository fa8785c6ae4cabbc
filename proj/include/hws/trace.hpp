#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace hws {

enum class Side { Lower, Upper };

const char* sideName(Side side);

// One search run is logged as an append-only event sequence with a monotone
// step index. Serialized as line-delimited JSON, schema version 1; field
// names are documented in the README.

struct EvaluatedEvent {
    int size = 0;
    double accuracy = 0.0;
};

struct SlopeEvent {
    int mid = 0;
    int delta = 0;
    int lo = 0;  // actual endpoints after boundary clamping
    int hi = 0;
    double slope = 0.0;
};

struct PosteriorEvent {
    Side side = Side::Lower;
    double likelihood = 0.0;
    double prior = 0.0;
    double posterior = 0.0;
};

struct BoundMovedEvent {
    Side which = Side::Lower;
    int oldBound = 0;
    int newBound = 0;
};

struct AcceptedEvent {
    int size = 0;
    std::optional<double> posterior;
    std::string reason;  // posterior_threshold | two_sigma | run_to_completion |
                         // forced_termination | degenerate_bracket | linear_argmax
};

struct TraceEvent {
    int step = 0;
    std::variant<EvaluatedEvent, SlopeEvent, PosteriorEvent, BoundMovedEvent, AcceptedEvent> payload;
};

class SearchTrace {
public:
    template <typename Event>
    void push(Event event) {
        events_.push_back(TraceEvent{nextStep_++, std::move(event)});
    }

    const std::vector<TraceEvent>& events() const { return events_; }
    bool empty() const { return events_.empty(); }
    std::size_t size() const { return events_.size(); }

    std::string toJsonLines() const;
    void writeJsonLines(const std::filesystem::path& path) const;
    static SearchTrace fromJsonLines(const std::string& text);
    static SearchTrace loadJsonLines(const std::filesystem::path& path);

private:
    std::vector<TraceEvent> events_;
    int nextStep_ = 0;
};

}  // namespace hws
