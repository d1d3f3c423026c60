#include "chroma/report.hpp"

#include "json.hpp"

namespace chroma {

StageRecord& PipelineReport::add(std::string name, std::string status) {
  stages.push_back(StageRecord{std::move(name), std::move(status), 0.0, {}, {}});
  return stages.back();
}

const StageRecord* PipelineReport::find(const std::string& name) const {
  for (const auto& s : stages) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

void PipelineReport::append(const PipelineReport& other) {
  stages.insert(stages.end(), other.stages.begin(), other.stages.end());
  advisories.insert(advisories.end(), other.advisories.begin(), other.advisories.end());
}

std::string PipelineReport::to_json(int indent) const {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["stages"] = nlohmann::ordered_json::array();
  for (const auto& s : stages) {
    nlohmann::ordered_json st;
    st["name"] = s.name;
    st["status"] = s.status;
    st["ms"] = s.millis;
    st["counters"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : s.counters) st["counters"][k] = v;
    if (!s.message.empty()) st["message"] = s.message;
    j["stages"].push_back(std::move(st));
  }
  j["advisories"] = advisories;
  return j.dump(indent);
}

StageTimer::StageTimer(PipelineReport& report, std::string name)
    : report_(report), index_(report.stages.size()), start_(std::chrono::steady_clock::now()) {
  report_.add(std::move(name));
}

StageTimer::~StageTimer() {
  if (index_ >= report_.stages.size()) return;
  const auto elapsed = std::chrono::steady_clock::now() - start_;
  report_.stages[index_].millis = std::chrono::duration<double, std::milli>(elapsed).count();
}

void StageTimer::fail(const std::string& message) {
  record().status = "failed";
  record().message = message;
}

}  // namespace chroma
