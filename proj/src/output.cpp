#include "starkhhg/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "json.hpp"

#include "starkhhg/errors.hpp"

namespace starkhhg {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> columns, std::string config_hash)
    : columns_(std::move(columns)) {
  notes_.emplace_back("config_hash", std::move(config_hash));
}

void CsvTable::note(const std::string& key, const std::string& value) {
  notes_.emplace_back(key, value);
}

void CsvTable::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size()) {
    throw DomainError("CSV row has the wrong number of cells");
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) body_ += ',';
    body_ += cells[i];
  }
  body_ += '\n';
}

std::string CsvTable::str() const {
  std::string out;
  for (const auto& [k, v] : notes_) out += "# " + k + ": " + v + "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  return out + body_;
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << str();
}

void write_manifest(const std::filesystem::path& path, const RunConfig& cfg,
                    const std::string& command,
                    const std::vector<std::string>& files) {
  nlohmann::json j;
  j["command"] = command;
  j["config_hash"] = config_hash(cfg);
  j["config"] = nlohmann::json::parse(canonical_json(cfg));
  j["files"] = files;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

}  // namespace starkhhg
