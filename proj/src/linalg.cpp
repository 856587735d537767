#include "jdef/linalg.hpp"

namespace jdef {

double norm(const Eigen::Ref<const Matrix>& a, NormKind kind)
{
    if (a.size() == 0) {
        return 0.0;
    }
    if (kind == NormKind::frobenius) {
        return a.norm();
    }
    if (a.rows() == 1 || a.cols() == 1) {
        return a.norm();
    }
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

std::string_view to_string(NormKind kind)
{
    return kind == NormKind::spectral ? "spectral" : "frobenius";
}

NormKind parse_norm(std::string_view name)
{
    if (name == "spectral") {
        return NormKind::spectral;
    }
    if (name == "frobenius") {
        return NormKind::frobenius;
    }
    throw std::invalid_argument("unknown norm '" + std::string(name) + "' (expected spectral|frobenius)");
}

Matrix lu_solve(const Matrix& b, const Matrix& rhs)
{
    if (b.rows() == 1) {
        return rhs / b(0, 0);
    }
    return b.partialPivLu().solve(rhs);
}

} // namespace jdef
