#pragma once

#include <vector>

#include <Eigen/SparseCore>

namespace frost::detail
{
/// Symmetric elimination of prescribed dofs: known columns move to the
/// right-hand side, prescribed rows and columns become identity rows.
/// `fixed` flags the prescribed dofs and `value` holds their values.
void eliminate_prescribed(Eigen::SparseMatrix<double>& matrix,
                          Eigen::VectorXd& rhs, std::vector<bool> const& fixed,
                          Eigen::VectorXd const& value);

}  // namespace frost::detail
