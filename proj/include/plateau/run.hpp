#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "plateau/config.hpp"

namespace plateau {

/// Emitted files and completed stages of one run. MANIFEST lists each
/// stage, then each file with its byte size and SHA-256. An existing
/// MANIFEST in the directory is merged (same-name entries are replaced), so
/// analyze after solve keeps the solve entries.
class Manifest {
 public:
  explicit Manifest(std::filesystem::path dir);

  /// Writes `content` to dir/name and records it.
  void emit(const std::string& name, const std::string& content);
  void stage(const std::string& name);
  void write() const;

 private:
  struct File {
    std::string name;
    std::size_t size;
    std::string sha256;
  };
  std::filesystem::path dir_;
  std::vector<std::string> stages_;
  std::vector<File> files_;
};

std::string sha256_hex(const std::string& bytes);

/// Runs the configured mode into config.out_dir. Summary lines go to `log`.
/// Module errors propagate after MANIFEST is flushed with the stages that
/// did complete.
void run(const RunConfig& config, std::ostream& log);

}  // namespace plateau
