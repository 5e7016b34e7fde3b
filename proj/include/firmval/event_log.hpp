#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "firmval/ledger.hpp"

namespace firmval {

/// Line-delimited event log. One record per line, schema
///   {"kind": <string>, "payload": {...}, "seq": <1-based integer>}
/// with keys emitted in sorted order and money carried as integer cents,
/// so serialize -> parse -> serialize is byte-stable.
std::string serialize_event_log(const std::vector<LedgerEvent>& events);
std::vector<LedgerEvent> parse_event_log(const std::string& text);

nlohmann::json event_to_json(std::size_t seq, const LedgerEvent& event);
LedgerEvent event_from_json(const nlohmann::json& record);

/// Canonical book state, used for replay-determinism checks.
nlohmann::json book_to_json(const FirmBook& book);
std::string book_state_string(const FirmBook& book);

}  // namespace firmval
