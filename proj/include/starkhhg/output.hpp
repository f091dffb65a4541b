#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "starkhhg/config.hpp"

namespace starkhhg {

// Shortest round-trip decimal form of x.
std::string format_number(double x);

// CSV table with `# key: value` header lines. The first header line carries
// the resolved-config hash.
class CsvTable {
 public:
  CsvTable(std::vector<std::string> columns, std::string config_hash);

  void note(const std::string& key, const std::string& value);
  void row(const std::vector<std::string>& cells);

  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> notes_;
  std::string body_;
};

// JSON manifest: resolved configuration, its hash, the subcommand and the
// list of files written.
void write_manifest(const std::filesystem::path& path, const RunConfig& cfg,
                    const std::string& command,
                    const std::vector<std::string>& files);

}  // namespace starkhhg
