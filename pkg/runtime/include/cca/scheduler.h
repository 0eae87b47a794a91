// Single-threaded scheduler stepping components in registration order.
//
// Each step(state) call invokes the matching hook exactly once on every
// component registered for that state; components without the state are
// skipped entirely.
#ifndef CCA_RUNTIME_SCHEDULER_H
#define CCA_RUNTIME_SCHEDULER_H

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "cca/component.h"

namespace cca {

enum class State { Execution, OnlineLearning, OfflineLearning };

class Scheduler {
 public:
  void add(Component& component, std::initializer_list<State> states) {
    Entry entry{&component, false, false, false};
    for (State s : states) {
      switch (s) {
        case State::Execution:
          entry.execution = true;
          break;
        case State::OnlineLearning:
          entry.online = true;
          break;
        case State::OfflineLearning:
          entry.offline = true;
          break;
      }
    }
    entries_.push_back(entry);
  }

  void init() {
    for (Entry& entry : entries_) {
      entry.component->onInit();
    }
  }

  void step(State state) {
    for (Entry& entry : entries_) {
      switch (state) {
        case State::Execution:
          if (entry.execution) entry.component->onExecute();
          break;
        case State::OnlineLearning:
          if (entry.online) entry.component->onOnlineLearning();
          break;
        case State::OfflineLearning:
          if (entry.offline) entry.component->onOfflineLearning();
          break;
      }
    }
  }

  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    Component* component;
    bool execution;
    bool online;
    bool offline;
  };

  std::vector<Entry> entries_;
};

}  // namespace cca

#endif  // CCA_RUNTIME_SCHEDULER_H
