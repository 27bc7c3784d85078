#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "entchain/chain_model.hpp"

namespace entchain {

/// A protocol file is self-describing: chain parameters plus the segment
/// list. Optional metadata written by the optimizer is preserved on parse.
struct ProtocolFile {
    ChainConfig chain;
    ControlSchedule schedule;
    std::optional<nlohmann::json> metadata;
};

/// Parse a protocol file (JSON: omega0, n_oscillators, temperature, c_max,
/// segments as {duration, coupling} records). Errors carry the offending
/// field or segment index; an empty segment list is an error. Throws
/// std::runtime_error with a descriptive message.
ProtocolFile parse_protocol_file(const std::string& path);

/// Canonical serialization; parse followed by serialize reproduces a
/// canonical file byte for byte.
std::string serialize_protocol(const ChainConfig& chain,
                               const ControlSchedule& schedule,
                               const std::optional<nlohmann::json>& metadata =
                                   std::nullopt);
void write_protocol_file(const std::string& path, const ChainConfig& chain,
                         const ControlSchedule& schedule,
                         const std::optional<nlohmann::json>& metadata =
                             std::nullopt);

/// Fixed-precision decimal used in CSV output (12 significant digits).
std::string format_csv_number(double x);

}  // namespace entchain
