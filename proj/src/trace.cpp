#include "hws/trace.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hws/errors.hpp"

namespace hws {

using nlohmann::json;

const char* sideName(Side side) { return side == Side::Lower ? "lower" : "upper"; }

namespace {

Side sideFromName(const std::string& name) {
    if (name == "lower") return Side::Lower;
    if (name == "upper") return Side::Upper;
    throw ParseError("unknown side '" + name + "'");
}

json toJson(const TraceEvent& event) {
    json j;
    j["v"] = 1;
    j["step"] = event.step;
    std::visit(
        [&j](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, EvaluatedEvent>) {
                j["event"] = "evaluated";
                j["size"] = e.size;
                j["accuracy"] = e.accuracy;
            } else if constexpr (std::is_same_v<T, SlopeEvent>) {
                j["event"] = "slope";
                j["mid"] = e.mid;
                j["delta"] = e.delta;
                j["lo"] = e.lo;
                j["hi"] = e.hi;
                j["slope"] = e.slope;
            } else if constexpr (std::is_same_v<T, PosteriorEvent>) {
                j["event"] = "posterior";
                j["side"] = sideName(e.side);
                j["likelihood"] = e.likelihood;
                j["prior"] = e.prior;
                j["posterior"] = e.posterior;
            } else if constexpr (std::is_same_v<T, BoundMovedEvent>) {
                j["event"] = "bound_moved";
                j["which"] = sideName(e.which);
                j["old"] = e.oldBound;
                j["new"] = e.newBound;
            } else {
                j["event"] = "accepted";
                j["size"] = e.size;
                if (e.posterior.has_value()) j["posterior"] = *e.posterior;
                j["reason"] = e.reason;
            }
        },
        event.payload);
    return j;
}

TraceEvent fromJson(const json& j) {
    TraceEvent event;
    event.step = j.at("step").get<int>();
    const std::string kind = j.at("event").get<std::string>();
    if (kind == "evaluated") {
        event.payload = EvaluatedEvent{j.at("size").get<int>(), j.at("accuracy").get<double>()};
    } else if (kind == "slope") {
        event.payload = SlopeEvent{j.at("mid").get<int>(), j.at("delta").get<int>(), j.at("lo").get<int>(),
                                   j.at("hi").get<int>(), j.at("slope").get<double>()};
    } else if (kind == "posterior") {
        event.payload = PosteriorEvent{sideFromName(j.at("side").get<std::string>()),
                                       j.at("likelihood").get<double>(), j.at("prior").get<double>(),
                                       j.at("posterior").get<double>()};
    } else if (kind == "bound_moved") {
        event.payload = BoundMovedEvent{sideFromName(j.at("which").get<std::string>()),
                                        j.at("old").get<int>(), j.at("new").get<int>()};
    } else if (kind == "accepted") {
        AcceptedEvent e;
        e.size = j.at("size").get<int>();
        if (j.contains("posterior")) e.posterior = j.at("posterior").get<double>();
        e.reason = j.at("reason").get<std::string>();
        event.payload = std::move(e);
    } else {
        throw ParseError("unknown trace event '" + kind + "'");
    }
    return event;
}

}  // namespace

std::string SearchTrace::toJsonLines() const {
    std::string out;
    for (const auto& event : events_) {
        out += toJson(event).dump();
        out += '\n';
    }
    return out;
}

void SearchTrace::writeJsonLines(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << toJsonLines();
}

SearchTrace SearchTrace::fromJsonLines(const std::string& text) {
    SearchTrace trace;
    std::istringstream in(text);
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError("trace line " + std::to_string(lineNo) + ": " + e.what());
        }
        TraceEvent event = fromJson(j);
        trace.events_.push_back(event);
        trace.nextStep_ = std::max(trace.nextStep_, event.step + 1);
    }
    return trace;
}

SearchTrace SearchTrace::loadJsonLines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return fromJsonLines(buffer.str());
}

}  // namespace hws
