#ifndef RTO_MMA_HPP
#define RTO_MMA_HPP

#include <Eigen/Core>

namespace rto {

// Method of moving asymptotes for box-constrained variables in [0, 1]
// with a single inequality constraint g(x) <= 0. The convex separable
// subproblem is solved through its dual by bisection on the constraint
// multiplier.
class MmaUpdater {
 public:
  explicit MmaUpdater(int n, double move_limit = 0.2);

  // One update from the current point, the objective gradient and the
  // constraint value/gradient. Asymptotes adapt from the iterate history.
  Eigen::VectorXd update(const Eigen::VectorXd& x, const Eigen::VectorXd& dfdx,
                         double g, const Eigen::VectorXd& dgdx);

  // Re-solve the subproblem at the same point with the current
  // asymptotes, without advancing the iterate history. Used together
  // with tighten() by the conservative outer loop.
  Eigen::VectorXd resolve(const Eigen::VectorXd& x, const Eigen::VectorXd& dfdx,
                          double g, const Eigen::VectorXd& dgdx) const;

  // Pull the asymptotes toward the last expansion point.
  void tighten(double factor = 0.7);

  int iteration() const { return iter_; }
  double move_limit() const { return move_; }

 private:
  int n_;
  double move_;
  int iter_ = 0;
  Eigen::VectorXd xold1_, xold2_, low_, upp_;
  Eigen::VectorXd xlast_;  // point the stored asymptotes belong to
};

}  // namespace rto

#endif
