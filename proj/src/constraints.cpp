#include "constraints.hpp"

namespace frost::detail
{
void eliminate_prescribed(Eigen::SparseMatrix<double>& matrix,
                          Eigen::VectorXd& rhs, std::vector<bool> const& fixed,
                          Eigen::VectorXd const& value)
{
    using SparseMatrix = Eigen::SparseMatrix<double>;
    for (Eigen::Index col = 0; col < matrix.outerSize(); ++col)
    {
        bool const col_fixed = fixed[static_cast<std::size_t>(col)];
        for (SparseMatrix::InnerIterator it(matrix, col); it; ++it)
        {
            bool const row_fixed = fixed[static_cast<std::size_t>(it.row())];
            if (col_fixed && !row_fixed)
            {
                rhs[it.row()] -= it.value() * value[col];
            }
            if (col_fixed || row_fixed)
            {
                it.valueRef() = it.row() == col ? 1.0 : 0.0;
            }
        }
    }
    for (Eigen::Index dof = 0; dof < matrix.rows(); ++dof)
    {
        if (fixed[static_cast<std::size_t>(dof)])
        {
            rhs[dof] = value[dof];
            if (matrix.coeff(dof, dof) != 1.0)
            {
                matrix.coeffRef(dof, dof) = 1.0;
            }
        }
    }
    matrix.prune(0.0);
}

}  // namespace frost::detail
