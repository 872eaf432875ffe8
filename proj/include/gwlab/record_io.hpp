#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "gwlab/watermark.hpp"

namespace gwlab {

// Ledger document (schema "gwlab.ledger/v1"):
//
// {
//   "schema": "gwlab.ledger/v1",
//   "records": [
//     {
//       "recipient_id": "alice",
//       "wm_seed": "1234567890123",          // decimal string, full 64 bits
//       "params": {"p": 0.5, "delta": 0.3, "k": 28, "search_cap": 1000000},
//       "slot_labels": [[15, 20, ...], ...],  // k ascending degree lists
//       "expected_bits": "0110..."            // C(k,2) chars, rows i<j
//     }
//   ]
// }

inline constexpr const char* kLedgerSchema = "gwlab.ledger/v1";

nlohmann::json record_to_json(const RecipientRecord& record);
RecipientRecord record_from_json(const nlohmann::json& j);

void write_ledger(std::ostream& out, const std::vector<RecipientRecord>& records);
std::vector<RecipientRecord> read_ledger(std::istream& in);

void write_ledger_file(const std::string& path, const std::vector<RecipientRecord>& records);
std::vector<RecipientRecord> read_ledger_file(const std::string& path);

}  // namespace gwlab
