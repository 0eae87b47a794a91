// Typed ports with single-slot latest-value semantics.
//
// An output port owns one value slot; connecting binds the input port to
// that slot, so readers always observe the most recent write.  Connecting
// ports of different kinds or dimensions does not compile.
#ifndef CCA_RUNTIME_PORT_H
#define CCA_RUNTIME_PORT_H

#include <array>
#include <cstddef>

#include "cca/kinds.h"

namespace cca {

template <class Kind, int Dim>
class OutPort;

template <class Kind, int Dim>
class InPort {
 public:
  using Value = std::array<double, static_cast<std::size_t>(Dim)>;

  bool connected() const { return source_ != nullptr; }

  // Unconnected ports read as all zeros.
  Value read() const { return source_ != nullptr ? source_->latest() : Value{}; }

 private:
  template <class K, int N>
  friend void connect(OutPort<K, N>& out, InPort<K, N>& in);

  const OutPort<Kind, Dim>* source_ = nullptr;
};

template <class Kind, int Dim>
class OutPort {
 public:
  using Value = std::array<double, static_cast<std::size_t>(Dim)>;

  void write(const Value& value) { value_ = value; }
  const Value& latest() const { return value_; }

 private:
  Value value_{};
};

// Generated hulls spell port members as cca::Port<Kind, Dim>::In / ::Out.
template <class Kind, int Dim>
struct Port {
  using In = InPort<Kind, Dim>;
  using Out = OutPort<Kind, Dim>;
};

template <class K, int N>
void connect(OutPort<K, N>& out, InPort<K, N>& in) {
  in.source_ = &out;
}

}  // namespace cca

#endif  // CCA_RUNTIME_PORT_H
