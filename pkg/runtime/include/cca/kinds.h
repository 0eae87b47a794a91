// Space kind tags used as the first argument of cca::Port.
#ifndef CCA_RUNTIME_KINDS_H
#define CCA_RUNTIME_KINDS_H

namespace cca {

struct JointAngles {};
struct JointVelocities {};
struct JointTorques {};
struct JointImpedance {};
struct CartesianPosition {};
struct CartesianOrientation {};
struct CartesianPose {};
struct CartesianWrench {};
struct ForceTorque {};
struct Phase {};
struct Scalar {};
struct EventFlag {};

}  // namespace cca

#endif  // CCA_RUNTIME_KINDS_H
