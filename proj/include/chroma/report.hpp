#pragma once

#include <chrono>
#include <map>
#include <string>
#include <vector>

namespace chroma {

struct StageRecord {
  std::string name;
  std::string status;  // "ok", "failed", "skipped", "advisory"
  double millis = 0.0;
  std::map<std::string, double> counters;
  std::string message;
};

// Ordered record of every pipeline stage.
struct PipelineReport {
  std::vector<StageRecord> stages;
  std::vector<std::string> advisories;

  StageRecord& add(std::string name, std::string status = "ok");
  const StageRecord* find(const std::string& name) const;
  void append(const PipelineReport& other);

  // JSON object with `schema: 1`.
  std::string to_json(int indent = 2) const;
};

// Times a stage; the record is appended on construction so failures still
// show up, and the elapsed time is filled in on destruction.
class StageTimer {
 public:
  StageTimer(PipelineReport& report, std::string name);
  ~StageTimer();
  StageTimer(const StageTimer&) = delete;
  StageTimer& operator=(const StageTimer&) = delete;

  StageRecord& record() { return report_.stages[index_]; }
  void fail(const std::string& message);

 private:
  PipelineReport& report_;
  std::size_t index_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace chroma
