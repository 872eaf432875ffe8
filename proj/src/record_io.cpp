#include "gwlab/record_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "gwlab/error.hpp"

namespace gwlab {

using nlohmann::json;

json record_to_json(const RecipientRecord& record) {
  json labels = json::array();
  for (const auto& l : record.slot_labels) labels.push_back(l.degrees);
  return json{
      {"recipient_id", record.recipient_id},
      {"wm_seed", std::to_string(record.wm_seed)},
      {"params",
       {{"p", record.params.p},
        {"delta", record.params.delta},
        {"k", record.params.k},
        {"search_cap", record.params.search_cap}}},
      {"slot_labels", std::move(labels)},
      {"expected_bits", record.expected_bits.to_string()},
  };
}

RecipientRecord record_from_json(const json& j) {
  try {
    RecipientRecord r;
    r.recipient_id = j.at("recipient_id").get<std::string>();
    const auto seed = j.at("wm_seed").get<std::string>();
    std::size_t used = 0;
    r.wm_seed = std::stoull(seed, &used);
    if (used != seed.size()) throw ParseError("wm_seed is not a decimal integer");
    const auto& p = j.at("params");
    r.params.p = p.at("p").get<double>();
    r.params.delta = p.at("delta").get<double>();
    r.params.k = p.at("k").get<std::size_t>();
    r.params.search_cap = p.at("search_cap").get<std::uint64_t>();
    for (const auto& l : j.at("slot_labels"))
      r.slot_labels.push_back(NsdLabel{l.get<std::vector<std::uint32_t>>()});
    if (r.slot_labels.size() != r.params.k)
      throw ParseError("record has " + std::to_string(r.slot_labels.size()) +
                       " slot labels but k = " + std::to_string(r.params.k));
    r.expected_bits = PairBits::from_string(r.params.k, j.at("expected_bits").get<std::string>());
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid recipient record: ") + e.what());
  } catch (const std::logic_error& e) {
    throw ParseError(std::string("invalid recipient record: ") + e.what());
  }
}

void write_ledger(std::ostream& out, const std::vector<RecipientRecord>& records) {
  json doc{{"schema", kLedgerSchema}, {"records", json::array()}};
  for (const auto& r : records) doc["records"].push_back(record_to_json(r));
  out << doc.dump(2) << '\n';
}

std::vector<RecipientRecord> read_ledger(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("ledger is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("schema", "") != kLedgerSchema)
    throw ParseError(std::string("ledger schema tag must be \"") + kLedgerSchema + "\"");
  std::vector<RecipientRecord> out;
  for (const auto& r : doc.at("records")) out.push_back(record_from_json(r));
  return out;
}

void write_ledger_file(const std::string& path, const std::vector<RecipientRecord>& records) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_ledger(out, records);
}

std::vector<RecipientRecord> read_ledger_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_ledger(in);
}

}  // namespace gwlab
