#include "tbeam/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "tbeam/errors.hpp"

namespace tbeam::linalg {

namespace {

double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw ValidationError("matmul: dimension mismatch");
  Matrix c(a.rows(), b.cols());
  const int n = a.rows(), m = a.cols(), p = b.cols();
  for (int i = 0; i < n; ++i) {
    double* ci = c.row(i);
    const double* ai = a.row(i);
    for (int k = 0; k < m; ++k) {
      const double aik = ai[k];
      if (aik == 0.0) continue;
      const double* bk = b.row(k);
      for (int j = 0; j < p; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Matrix add(const Matrix& a, const Matrix& b) {
  Matrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] += b.data()[i];
  return c;
}

Matrix sub(const Matrix& a, const Matrix& b) {
  Matrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

Matrix scale(const Matrix& a, double s) {
  Matrix c = a;
  for (double& x : c.data()) x *= s;
  return c;
}

Vec matvec(const Matrix& a, const Vec& x) {
  if (static_cast<int>(x.size()) != a.cols()) throw ValidationError("matvec: dimension mismatch");
  Vec y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    const double* ai = a.row(i);
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += ai[j] * x[j];
    y[i] = s;
  }
  return y;
}

CVec matvec(const Matrix& a, const CVec& x) {
  if (static_cast<int>(x.size()) != a.cols()) throw ValidationError("matvec: dimension mismatch");
  CVec y(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    const double* ai = a.row(i);
    std::complex<double> s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += ai[j] * x[j];
    y[i] = s;
  }
  return y;
}

double frobenius(const Matrix& a) {
  double s = 0.0;
  for (double x : a.data()) s += x * x;
  return std::sqrt(s);
}

double max_abs(const Matrix& a) {
  double s = 0.0;
  for (double x : a.data()) s = std::max(s, std::abs(x));
  return s;
}

double norm_1(const Matrix& a) {
  double best = 0.0;
  for (int j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
    best = std::max(best, s);
  }
  return best;
}

double norm2(const Vec& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double norm2(const CVec& x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

template <typename T>
static LuDecomp<T> lu_factor_impl(Mat<T> a) {
  const int n = a.rows();
  if (n != a.cols()) throw ValidationError("lu_factor: matrix not square");
  LuDecomp<T> f{std::move(a), std::vector<int>(n)};
  Mat<T>& lu = f.lu;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(lu(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(lu(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    f.perm[k] = piv;
    if (piv != k)
      for (int j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
    if (best == 0.0) throw NumericalError("lu_factor: singular matrix at column " + std::to_string(k));
    const T pivot = lu(k, k);
    for (int i = k + 1; i < n; ++i) {
      const T m = lu(i, k) / pivot;
      lu(i, k) = m;
      if (m == T{}) continue;
      T* ri = lu.row(i);
      const T* rk = lu.row(k);
      for (int j = k + 1; j < n; ++j) ri[j] -= m * rk[j];
    }
  }
  return f;
}

LuDecomp<double> lu_factor(Matrix a) { return lu_factor_impl(std::move(a)); }
LuDecomp<std::complex<double>> lu_factor(CMatrix a) { return lu_factor_impl(std::move(a)); }

template <typename T>
static std::vector<T> lu_solve_impl(const LuDecomp<T>& f, std::vector<T> b) {
  const int n = f.lu.rows();
  if (static_cast<int>(b.size()) != n) throw ValidationError("lu_solve: dimension mismatch");
  for (int k = 0; k < n; ++k)
    if (f.perm[k] != k) std::swap(b[k], b[f.perm[k]]);
  for (int i = 1; i < n; ++i) {
    T s = b[i];
    const T* ri = f.lu.row(i);
    for (int j = 0; j < i; ++j) s -= ri[j] * b[j];
    b[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    T s = b[i];
    const T* ri = f.lu.row(i);
    for (int j = i + 1; j < n; ++j) s -= ri[j] * b[j];
    b[i] = s / ri[i];
  }
  return b;
}

Vec lu_solve(const LuDecomp<double>& f, Vec b) { return lu_solve_impl(f, std::move(b)); }
CVec lu_solve(const LuDecomp<std::complex<double>>& f, CVec b) { return lu_solve_impl(f, std::move(b)); }

Matrix lu_solve_mat(const LuDecomp<double>& f, const Matrix& b) {
  Matrix x(b.rows(), b.cols());
  Vec col(b.rows());
  for (int j = 0; j < b.cols(); ++j) {
    for (int i = 0; i < b.rows(); ++i) col[i] = b(i, j);
    Vec sol = lu_solve(f, col);
    for (int i = 0; i < b.rows(); ++i) x(i, j) = sol[i];
  }
  return x;
}

Matrix inverse(const Matrix& a) { return lu_solve_mat(lu_factor(a), Matrix::identity(a.rows())); }

Matrix cholesky_lower(const Matrix& s) {
  const int n = s.rows();
  if (n != s.cols()) throw ValidationError("cholesky: matrix not square");
  Matrix l(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = s(i, j);
      for (int k = 0; k < j; ++k) sum -= l(i, k) * l(j, k);
      if (i == j) {
        if (sum <= 0.0) throw NumericalError("cholesky: matrix not positive definite");
        l(i, i) = std::sqrt(sum);
      } else {
        l(i, j) = sum / l(j, j);
      }
    }
  }
  return l;
}

Vec cholesky_solve(const Matrix& l, Vec b) {
  const int n = l.rows();
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int j = 0; j < i; ++j) s -= l(i, j) * b[j];
    b[i] = s / l(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= l(j, i) * b[j];
    b[i] = s / l(i, i);
  }
  return b;
}

Matrix right_solve_upper(const Matrix& c, const Matrix& r) {
  // Solves X R = C for upper triangular R, row by row via R^T x = c.
  const int n = r.rows();
  Matrix x(c.rows(), n);
  for (int i = 0; i < c.rows(); ++i) {
    for (int j = 0; j < n; ++j) {
      double s = c(i, j);
      for (int k = 0; k < j; ++k) s -= r(k, j) * x(i, k);
      x(i, j) = s / r(j, j);
    }
  }
  return x;
}

// ---------------------------------------------------------------------------
// Eigenvalues: balancing, Hessenberg reduction, Francis double-shift QR.
// ---------------------------------------------------------------------------

namespace {

void balance_in_place(Matrix& a) {
  const int n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s0 = c + r;
      double f = 1.0;
      while (c < r / 2.0) {
        c *= 2.0;
        r /= 2.0;
        f *= 2.0;
      }
      while (c >= r * 2.0) {
        c /= 2.0;
        r *= 2.0;
        f /= 2.0;
      }
      if ((c + r) < 0.95 * s0) {
        done = false;
        const double g = 1.0 / f;
        for (int j = 0; j < n; ++j) a(i, j) *= g;  // row i
        for (int j = 0; j < n; ++j) a(j, i) *= f;  // column i
      }
    }
  }
}

void hessenberg_in_place(Matrix& a) {
  const int n = a.rows();
  std::vector<double> v, w;
  for (int k = 0; k + 2 < n; ++k) {
    const int m = n - k - 1;  // length of the column tail to reflect
    v.assign(m, 0.0);
    for (int i = 0; i < m; ++i) v[i] = a(k + 1 + i, k);
    double nrm = 0.0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) continue;
    const double alpha = (v[0] >= 0.0) ? -nrm : nrm;
    v[0] -= alpha;
    double vv = 0.0;
    for (double x : v) vv += x * x;
    if (vv == 0.0) continue;
    const double beta = 2.0 / vv;

    // Left apply: rows k+1..n-1, columns k..n-1.
    w.assign(n - k, 0.0);
    for (int i = 0; i < m; ++i) {
      const double vi = v[i];
      const double* ra = a.row(k + 1 + i);
      for (int j = k; j < n; ++j) w[j - k] += vi * ra[j];
    }
    for (double& x : w) x *= beta;
    for (int i = 0; i < m; ++i) {
      const double vi = v[i];
      double* ra = a.row(k + 1 + i);
      for (int j = k; j < n; ++j) ra[j] -= vi * w[j - k];
    }

    // Right apply: all rows, columns k+1..n-1.
    for (int i = 0; i < n; ++i) {
      double* ra = a.row(i);
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += ra[k + 1 + j] * v[j];
      s *= beta;
      for (int j = 0; j < m; ++j) ra[k + 1 + j] -= s * v[j];
    }

    a(k + 1, k) = alpha;
    for (int i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix (destroys it).
CVec hqr_eigen(Matrix& a, long iter_cap) {
  const int n = a.rows();
  CVec out(n, {0.0, 0.0});
  if (n == 0) return out;
  const double eps = std::numeric_limits<double>::epsilon();

  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));
  if (anorm == 0.0) return out;

  long iter_total = 0;
  int nn = n - 1;
  int its = 0;
  double t = 0.0;
  while (nn >= 0) {
    if (nn == 0) {
      out[0] = {a(0, 0) + t, 0.0};
      break;
    }
    int l;
    for (l = nn; l >= 1; --l) {
      double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
      if (s == 0.0) s = anorm;
      if (std::abs(a(l, l - 1)) <= eps * s) {
        a(l, l - 1) = 0.0;
        break;
      }
    }
    double x = a(nn, nn);
    if (l == nn) {  // single root deflated
      out[nn] = {x + t, 0.0};
      --nn;
      its = 0;
      continue;
    }
    double y = a(nn - 1, nn - 1);
    double w = a(nn, nn - 1) * a(nn - 1, nn);
    if (l == nn - 1) {  // 2x2 block deflated
      double p = 0.5 * (y - x);
      const double q = p * p + w;
      double z = std::sqrt(std::abs(q));
      x += t;
      if (q >= 0.0) {
        z = p + sign_of(z, p);
        out[nn - 1] = {x + z, 0.0};
        out[nn] = out[nn - 1];
        if (z != 0.0) out[nn] = {x - w / z, 0.0};
      } else {
        out[nn - 1] = {x + p, z};
        out[nn] = {x + p, -z};
      }
      nn -= 2;
      its = 0;
      continue;
    }

    // QR step on rows/columns l..nn.
    if (++iter_total > iter_cap)
      throw NumericalError("eigenvalue iteration cap exceeded (" + std::to_string(iter_cap) + ")");
    if (its == 10 || its == 20 || its == 30 || its == 40) {
      // exceptional shift
      t += x;
      for (int i = 0; i <= nn; ++i) a(i, i) -= x;
      const double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
      y = x = 0.75 * s;
      w = -0.4375 * s * s;
    }
    if (its >= 60)
      throw NumericalError("eigenvalue block failed to converge after 60 iterations");
    ++its;

    double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
    int m;
    for (m = nn - 2; m >= l; --m) {
      z = a(m, m);
      const double rr = x - z;
      const double ss = y - z;
      p = (rr * ss - w) / a(m + 1, m) + a(m, m + 1);
      q = a(m + 1, m + 1) - z - rr - ss;
      r = a(m + 2, m + 1);
      const double sc = std::abs(p) + std::abs(q) + std::abs(r);
      p /= sc;
      q /= sc;
      r /= sc;
      if (m == l) break;
      const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
      const double v =
          std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
      if (u <= eps * v) break;
    }
    for (int i = m + 2; i <= nn; ++i) {
      a(i, i - 2) = 0.0;
      if (i != m + 2) a(i, i - 3) = 0.0;
    }
    for (int k = m; k <= nn - 1; ++k) {
      if (k != m) {
        p = a(k, k - 1);
        q = a(k + 1, k - 1);
        r = (k != nn - 1) ? a(k + 2, k - 1) : 0.0;
        x = std::abs(p) + std::abs(q) + std::abs(r);
        if (x != 0.0) {
          p /= x;
          q /= x;
          r /= x;
        }
      }
      const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
      if (s == 0.0) continue;
      if (k == m) {
        if (l != m) a(k, k - 1) = -a(k, k - 1);
      } else {
        a(k, k - 1) = -s * x;
      }
      p += s;
      x = p / s;
      y = q / s;
      z = r / s;
      q /= p;
      r /= p;
      const bool three = (k + 1 != nn);
      for (int j = k; j <= nn; ++j) {  // row modification
        double pp = a(k, j) + q * a(k + 1, j);
        if (three) {
          pp += r * a(k + 2, j);
          a(k + 2, j) -= pp * z;
        }
        a(k + 1, j) -= pp * y;
        a(k, j) -= pp * x;
      }
      const int mmin = (nn < k + 3) ? nn : k + 3;
      for (int i = l; i <= mmin; ++i) {  // column modification
        double pp = x * a(i, k) + y * a(i, k + 1);
        if (three) {
          pp += z * a(i, k + 2);
          a(i, k + 2) -= pp * r;
        }
        a(i, k + 1) -= pp * q;
        a(i, k) -= pp;
      }
    }
  }
  return out;
}

CVec eigenvalues_one_block(Matrix a) {
  balance_in_place(a);
  hessenberg_in_place(a);
  return hqr_eigen(a, 100L * std::max(1, a.rows()));
}

// Strongly connected components of the nonzero pattern (iterative Tarjan).
// Eigenvalues of the whole matrix are the union over components of the
// eigenvalues of the corresponding principal submatrices.
std::vector<std::vector<int>> nonzero_sccs(const Matrix& a) {
  const int n = a.rows();
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && a(i, j) != 0.0) adj[i].push_back(j);

  std::vector<int> index(n, -1), lowlink(n, 0), on_stack(n, 0);
  std::vector<int> stack;
  std::vector<std::vector<int>> comps;
  int next_index = 0;

  struct Frame {
    int v;
    std::size_t child;
  };
  std::vector<Frame> call;
  for (int s = 0; s < n; ++s) {
    if (index[s] != -1) continue;
    call.push_back({s, 0});
    while (!call.empty()) {
      Frame& f = call.back();
      const int v = f.v;
      if (f.child == 0) {
        index[v] = lowlink[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      bool descended = false;
      while (f.child < adj[v].size()) {
        const int w = adj[v][f.child++];
        if (index[w] == -1) {
          call.push_back({w, 0});
          descended = true;
          break;
        } else if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
      }
      if (descended) continue;
      if (lowlink[v] == index[v]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
      call.pop_back();
      if (!call.empty()) {
        const int parent = call.back().v;
        lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
      }
    }
  }
  return comps;
}

}  // namespace

CVec eigenvalues(const Matrix& a) {
  if (a.rows() != a.cols()) throw ValidationError("eigenvalues: matrix not square");
  const int n = a.rows();
  CVec all;
  all.reserve(n);
  for (const auto& comp : nonzero_sccs(a)) {
    const int m = static_cast<int>(comp.size());
    Matrix sub(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) sub(i, j) = a(comp[i], comp[j]);
    CVec ev = eigenvalues_one_block(std::move(sub));
    all.insert(all.end(), ev.begin(), ev.end());
  }
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return all;
}

CVec inverse_iteration(const Matrix& a, std::complex<double> lambda) {
  const int n = a.rows();
  const double scale = std::max(frobenius(a), 1.0);
  CMatrix b(n, n);
  std::complex<double> shift = lambda;
  CVec v(n);
  for (int i = 0; i < n; ++i) v[i] = std::complex<double>(1.0 + 0.25 * std::sin(0.7 * (i + 1)), 0.1 * std::cos(1.3 * (i + 1)));
  double nv = norm2(v);
  for (auto& x : v) x /= nv;

  for (int attempt = 0; attempt < 4; ++attempt) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = a(i, j) - (i == j ? shift : std::complex<double>{});
    try {
      auto f = lu_factor(b);
      for (int it = 0; it < 4; ++it) {
        v = lu_solve(f, std::move(v));
        nv = norm2(v);
        if (!(nv > 0.0) || !std::isfinite(nv)) throw NumericalError("inverse iteration breakdown");
        for (auto& x : v) x /= nv;
      }
      return v;
    } catch (const NumericalError&) {
      // exactly singular shift: nudge and retry
      shift += std::complex<double>(1e-12, 1e-12) * scale * static_cast<double>(attempt + 1);
    }
  }
  throw NumericalError("inverse iteration failed to factor shifted matrix");
}

Matrix expm(const Matrix& a) {
  const int n = a.rows();
  if (n != a.cols()) throw ValidationError("expm: matrix not square");
  const double theta13 = 5.371920351148152;
  const double nrm = norm_1(a);
  if (!std::isfinite(nrm)) throw NumericalError("expm: non-finite input");
  int s = 0;
  Matrix ascaled = a;
  if (nrm > theta13) {
    s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    ascaled = scale(a, std::pow(2.0, -s));
  }

  static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                             1187353796428800.0,  129060195264000.0,   10559470521600.0,
                             670442572800.0,      33522128640.0,       1323241920.0,
                             40840800.0,          960960.0,            16380.0,
                             182.0,               1.0};

  const Matrix i_n = Matrix::identity(n);
  const Matrix a2 = matmul(ascaled, ascaled);
  const Matrix a4 = matmul(a2, a2);
  const Matrix a6 = matmul(a2, a4);

  Matrix u_inner = add(scale(a6, b[13]), add(scale(a4, b[11]), scale(a2, b[9])));
  Matrix u = matmul(a6, u_inner);
  u = add(u, add(scale(a6, b[7]), add(scale(a4, b[5]), add(scale(a2, b[3]), scale(i_n, b[1])))));
  u = matmul(ascaled, u);

  Matrix v_inner = add(scale(a6, b[12]), add(scale(a4, b[10]), scale(a2, b[8])));
  Matrix v = matmul(a6, v_inner);
  v = add(v, add(scale(a6, b[6]), add(scale(a4, b[4]), add(scale(a2, b[2]), scale(i_n, b[0])))));

  Matrix p = add(v, u);
  Matrix q = sub(v, u);
  Matrix r = lu_solve_mat(lu_factor(std::move(q)), p);
  for (int k = 0; k < s; ++k) r = matmul(r, r);
  return r;
}

Vec singular_values(Matrix a) {
  // One-sided Jacobi on columns; work on the transpose so columns are contiguous.
  Matrix at = transpose(a);
  const int ncols = at.rows();
  const int m = at.cols();
  bool rotated = true;
  int sweeps = 0;
  while (rotated && sweeps++ < 60) {
    rotated = false;
    for (int i = 0; i < ncols - 1; ++i) {
      for (int j = i + 1; j < ncols; ++j) {
        double* ci = at.row(i);
        double* cj = at.row(j);
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (int k = 0; k < m; ++k) {
          app += ci[k] * ci[k];
          aqq += cj[k] * cj[k];
          apq += ci[k] * cj[k];
        }
        if (std::abs(apq) <= 1e-300 + 1e-15 * std::sqrt(app * aqq)) continue;
        rotated = true;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = sign_of(1.0, tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = c * t;
        for (int k = 0; k < m; ++k) {
          const double x = ci[k], y = cj[k];
          ci[k] = c * x - sn * y;
          cj[k] = sn * x + c * y;
        }
      }
    }
  }
  Vec sv(ncols);
  for (int i = 0; i < ncols; ++i) {
    double s = 0.0;
    const double* ci = at.row(i);
    for (int k = 0; k < m; ++k) s += ci[k] * ci[k];
    sv[i] = std::sqrt(s);
  }
  std::sort(sv.rbegin(), sv.rend());
  return sv;
}

double spectral_norm(const Matrix& a) {
  const Matrix g = matmul(transpose(a), a);
  double best = 0.0;
  for (const auto& ev : eigenvalues(g)) best = std::max(best, ev.real());
  return std::sqrt(std::max(best, 0.0));
}

}  // namespace tbeam::linalg
