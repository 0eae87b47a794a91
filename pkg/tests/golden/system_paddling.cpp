// GENERATED by amdsl v0.1.0 — DO NOT EDIT
// system bootstrap for 'paddling'
// requires the cca runtime headers on the include path: cca/runtime.h
#include <cstdlib>

#include "cca/runtime.h"
#include "PaddleGen_impl.h"
#include "fk_impl.h"
#include "ik_impl.h"

int main(int argc, char** argv) {
  int steps = (argc > 1) ? std::atoi(argv[1]) : 10;

  PaddleGenImpl c_PaddleGen;
  FkImpl c_fk;
  IkImpl c_ik;

  // deployment
  // TODO deploy host ? (PaddleGen)
  // TODO deploy process ? (PaddleGen)
  // TODO deploy rate_hz ? (PaddleGen)
  // TODO deploy host ? (fk)
  // TODO deploy process ? (fk)
  // TODO deploy rate_hz ? (fk)
  // TODO deploy host ? (ik)
  // TODO deploy process ? (ik)
  // TODO deploy rate_hz ? (ik)

  cca::Scheduler sched;
  sched.add(c_PaddleGen, {cca::State::Execution, cca::State::OnlineLearning});
  sched.add(c_fk, {cca::State::Execution, cca::State::OnlineLearning});
  sched.add(c_ik, {cca::State::Execution, cca::State::OnlineLearning});

  cca::connect(c_PaddleGen.u, c_fk.src);
  cca::connect(c_ik.dst, c_PaddleGen.goal);

  sched.init();
  for (int i = 0; i < steps; ++i) {
    sched.step(cca::State::OnlineLearning);
    sched.step(cca::State::Execution);
  }
  return 0;
}
