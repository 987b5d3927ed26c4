#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace hyrl {

/// Append-only JSONL stream, one record per line, flushed per record.
class JsonlWriter {
 public:
  explicit JsonlWriter(const std::filesystem::path& path);
  void write(const nlohmann::json& record);

 private:
  std::ofstream out_;
};

struct SeedOutcome {
  std::uint64_t seed = 0;
  bool success = false;
  std::string reason;  // success | budget | max_rounds | error: ...
  int rounds = 0;
  long long online_samples = 0;
  double final_success_rate = 0.0;
  double final_moving_average = 0.0;
};

/// seed,status,reason,rounds,online_samples,final_success_rate,final_moving_average
void write_summary_csv(const std::filesystem::path& path, const std::vector<SeedOutcome>& outcomes);

}  // namespace hyrl
