#pragma once

namespace beamtrack {

// Planar state of one user in the array frame: transceiver at the origin,
// boresight along +y. Positions in metres, velocities in m/s, accelerations
// in m/s^2.
struct UserKinematicState {
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double ax = 0.0;
  double ay = 0.0;
};

// Constant-acceleration update over dt seconds.
inline UserKinematicState propagate(const UserKinematicState& s, double dt) {
  UserKinematicState r = s;
  r.x = s.x + s.vx * dt + 0.5 * s.ax * dt * dt;
  r.y = s.y + s.vy * dt + 0.5 * s.ay * dt * dt;
  r.vx = s.vx + s.ax * dt;
  r.vy = s.vy + s.ay * dt;
  return r;
}

}  // namespace beamtrack
