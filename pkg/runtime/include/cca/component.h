// Component base: lifecycle hooks (default no-ops) and deployment storage.
#ifndef CCA_RUNTIME_COMPONENT_H
#define CCA_RUNTIME_COMPONENT_H

#include <map>
#include <string>

namespace cca {

class Component {
 public:
  virtual ~Component() = default;

  virtual void onInit() {}
  virtual void onExecute() {}
  virtual void onOnlineLearning() {}
  virtual void onOfflineLearning() {}
  virtual bool checkCriterion() { return true; }

  void deploy(const std::string& key, const std::string& value) {
    deployment_[key] = value;
  }
  const std::map<std::string, std::string>& deployment() const {
    return deployment_;
  }

 private:
  std::map<std::string, std::string> deployment_;
};

}  // namespace cca

#endif  // CCA_RUNTIME_COMPONENT_H
