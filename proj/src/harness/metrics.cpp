#include "hyrl/harness/metrics.hpp"

#include "hyrl/common.hpp"

#include <iomanip>

namespace hyrl {

JsonlWriter::JsonlWriter(const std::filesystem::path& path) : out_(path, std::ios::out | std::ios::trunc) {
  if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
}

void JsonlWriter::write(const nlohmann::json& record) {
  out_ << record.dump() << '\n';
  out_.flush();
}

void write_summary_csv(const std::filesystem::path& path, const std::vector<SeedOutcome>& outcomes) {
  std::ofstream out(path, std::ios::out | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "seed,status,reason,rounds,online_samples,final_success_rate,final_moving_average\n";
  out << std::setprecision(17);
  for (const auto& o : outcomes) {
    std::string reason = o.reason;
    for (char& c : reason)
      if (c == ',' || c == '\n') c = ';';
    out << o.seed << ',' << (o.success ? "success" : "failure") << ',' << reason << ',' << o.rounds << ','
        << o.online_samples << ',' << o.final_success_rate << ',' << o.final_moving_average << '\n';
  }
}

}  // namespace hyrl
