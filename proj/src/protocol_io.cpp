#include "entchain/protocol_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace entchain {

namespace {

using ordered_json = nlohmann::ordered_json;

double require_number(const nlohmann::json& obj, const char* key) {
    if (!obj.contains(key)) {
        std::ostringstream msg;
        msg << "protocol file: missing field '" << key << "'";
        throw std::runtime_error(msg.str());
    }
    if (!obj[key].is_number()) {
        std::ostringstream msg;
        msg << "protocol file: field '" << key << "' must be a number";
        throw std::runtime_error(msg.str());
    }
    return obj[key].get<double>();
}

}  // namespace

ProtocolFile parse_protocol_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("protocol file: cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("protocol file '" + path +
                                 "': " + std::string(e.what()));
    }
    if (!doc.is_object())
        throw std::runtime_error("protocol file: top level must be an object");

    const double omega0 = require_number(doc, "omega0");
    const double n_raw = require_number(doc, "n_oscillators");
    const int n = static_cast<int>(n_raw);
    if (n != n_raw)
        throw std::runtime_error("protocol file: n_oscillators must be an integer");
    const double temperature = require_number(doc, "temperature");
    const double c_max = require_number(doc, "c_max");

    if (!doc.contains("segments") || !doc["segments"].is_array())
        throw std::runtime_error("protocol file: 'segments' must be a list");
    const auto& segs_json = doc["segments"];
    if (segs_json.empty())
        throw std::runtime_error("protocol file: segment list is empty");

    std::vector<Segment> segments;
    segments.reserve(segs_json.size());
    for (std::size_t i = 0; i < segs_json.size(); ++i) {
        const auto& rec = segs_json[i];
        if (!rec.is_object() || !rec.contains("duration") ||
            !rec.contains("coupling")) {
            std::ostringstream msg;
            msg << "protocol file: segment " << i + 1
                << " needs 'duration' and 'coupling'";
            throw std::runtime_error(msg.str());
        }
        const double duration = rec["duration"].get<double>();
        const double coupling = rec["coupling"].get<double>();
        if (!(duration > 0.0)) {
            std::ostringstream msg;
            msg << "protocol file: segment " << i + 1
                << " has nonpositive duration " << duration;
            throw std::runtime_error(msg.str());
        }
        if (coupling < 0.0 || coupling > c_max) {
            std::ostringstream msg;
            msg << "protocol file: segment " << i + 1 << " coupling "
                << coupling << " outside [0, " << c_max << "]";
            throw std::runtime_error(msg.str());
        }
        segments.push_back(Segment{duration, coupling});
    }

    try {
        ProtocolFile file{ChainConfig(n, omega0, temperature),
                          ControlSchedule(std::move(segments), c_max),
                          std::nullopt};
        if (doc.contains("metadata")) file.metadata = doc["metadata"];
        return file;
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error("protocol file '" + path +
                                 "': " + std::string(e.what()));
    }
}

std::string serialize_protocol(const ChainConfig& chain,
                               const ControlSchedule& schedule,
                               const std::optional<nlohmann::json>& metadata) {
    ordered_json doc;
    doc["omega0"] = chain.omega0;
    doc["n_oscillators"] = chain.n_oscillators;
    doc["temperature"] = chain.temperature;
    doc["c_max"] = schedule.c_max();
    doc["segments"] = ordered_json::array();
    for (const Segment& s : schedule.segments()) {
        ordered_json rec;
        rec["duration"] = s.duration;
        rec["coupling"] = s.coupling;
        doc["segments"].push_back(rec);
    }
    if (metadata) doc["metadata"] = *metadata;
    return doc.dump(2) + "\n";
}

void write_protocol_file(const std::string& path, const ChainConfig& chain,
                         const ControlSchedule& schedule,
                         const std::optional<nlohmann::json>& metadata) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("protocol file: cannot write '" + path + "'");
    out << serialize_protocol(chain, schedule, metadata);
}

std::string format_csv_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

}  // namespace entchain
