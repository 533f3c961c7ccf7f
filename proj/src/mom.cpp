// SPDX-License-Identifier: Apache-2.0
#include "swarmarray/mom.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "swarmarray/errors.hpp"

namespace swarmarray {

namespace {

struct GaussRule {
    std::vector<double> x;  // on [0, 1]
    std::vector<double> w;
};

// Gauss-Legendre nodes by Newton iteration on P_n, mapped to [0, 1].
GaussRule make_gauss(int n) {
    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        rule.x[i] = 0.5 * (1.0 - z);
        rule.w[i] = 1.0 / ((1.0 - z * z) * dp * dp);  // half of the [-1,1] weight
    }
    return rule;
}

const GaussRule& gauss(int n) {
    static const GaussRule g4 = make_gauss(4);
    static const GaussRule g8 = make_gauss(8);
    if (n == 4) return g4;
    if (n == 8) return g8;
    thread_local std::map<int, GaussRule> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss(n)).first;
    return it->second;
}

// Shape-function moments of one piece pair.
//   s[a][b] = int_P int_Q la(s) lb(s') G ds' ds    (la: 0 -> falling, 1 -> rising)
//   t       = int_P int_Q G ds' ds
struct PairIntegrals {
    complex s[2][2]{};
    complex t{};
};

struct PieceGeom {
    Vec3 start;
    Vec3 dir;
    double length;
    double radius;
};

// Inner integrals over Q for observation point r: j0 = int G, j1 = int (s'/l) G.
void inner_integrals(const PieceGeom& q, const Vec3& r, double k, const GaussRule& rule, complex& j0, complex& j1) {
    const Vec3 d = r - q.start;
    const double s0 = d.dot(q.dir);
    const double rho2 = std::max(d.squaredNorm() - s0 * s0, 0.0) + q.radius * q.radius;
    const double rho = std::sqrt(rho2);
    const double l = q.length;

    // Static 1/R part in closed form.
    const double a0 = std::asinh((l - s0) / rho) - std::asinh(-s0 / rho);
    const double r_end = std::sqrt((l - s0) * (l - s0) + rho2);
    const double r_start = std::sqrt(s0 * s0 + rho2);
    const double a1 = (r_end - r_start) + s0 * a0;

    // Smooth remainder (exp(-jkR) - 1) / R.
    complex b0{}, b1{};
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double sp = rule.x[i] * l;
        const double rr = std::sqrt((sp - s0) * (sp - s0) + rho2);
        const double kr = k * rr;
        // (cos(kr) - 1 - j sin(kr)) / rr, with the cancellation-free form of cos - 1.
        const double half = std::sin(0.5 * kr);
        const complex g(-2.0 * half * half / rr, -std::sin(kr) / rr);
        const double w = rule.w[i] * l;
        b0 += w * g;
        b1 += w * sp * g;
    }
    const double inv4pi = 1.0 / (4.0 * pi);
    j0 = (a0 + b0) * inv4pi;
    j1 = (a1 + b1) * (inv4pi / l);
}

PairIntegrals pair_integrals(const PieceGeom& p, const PieceGeom& q, double k) {
    const Vec3 cp = p.start + 0.5 * p.length * p.dir;
    const Vec3 cq = q.start + 0.5 * q.length * q.dir;
    const double sep = (cp - cq).norm();
    const double scale = std::max(p.length, q.length);

    // Near pairs need more outer points: the inner result has log-like peaks
    // of width ~radius at the shared nodes.
    const bool near = sep < 2.5 * scale;
    const int outer_sub = near ? 4 : 1;
    const GaussRule& outer = gauss(near ? 8 : 4);
    const GaussRule& inner = gauss(near ? 8 : 4);

    PairIntegrals out;
    for (int sub = 0; sub < outer_sub; ++sub) {
        for (std::size_t i = 0; i < outer.x.size(); ++i) {
            const double u = (sub + outer.x[i]) / outer_sub;
            const double w = outer.w[i] * p.length / outer_sub;
            const Vec3 r = p.start + u * p.length * p.dir;
            complex j0, j1;
            inner_integrals(q, r, k, inner, j0, j1);
            const complex jf = j0 - j1;  // falling shape on Q
            const double lf = 1.0 - u;   // falling shape on P
            out.t += w * j0;
            out.s[0][0] += w * lf * jf;
            out.s[0][1] += w * lf * j1;
            out.s[1][0] += w * u * jf;
            out.s[1][1] += w * u * j1;
        }
    }
    return out;
}

PieceGeom geom_of(const WireMesh::Piece& piece) {
    const Vec3 d = piece.end - piece.start;
    const double l = d.norm();
    return {piece.start, d / l, l, piece.radius};
}

// Closest distance between segments [p0,p1] and [q0,q1].
double segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1) {
    const Vec3 u = p1 - p0, v = q1 - q0, w = p0 - q0;
    const double a = u.dot(u), b = u.dot(v), c = v.dot(v), d = u.dot(w), e = v.dot(w);
    const double den = a * c - b * b;
    double sn, sd = den, tn, td = den;
    if (den < 1e-14 * a * c) {
        sn = 0.0;
        sd = 1.0;
        tn = e;
        td = c;
    } else {
        sn = b * e - c * d;
        tn = a * e - b * d;
        if (sn < 0.0) {
            sn = 0.0;
            tn = e;
            td = c;
        } else if (sn > sd) {
            sn = sd;
            tn = e + b;
            td = c;
        }
    }
    if (tn < 0.0) {
        tn = 0.0;
        sn = std::clamp(-d, 0.0, a);
        sd = a;
    } else if (tn > td) {
        tn = td;
        sn = std::clamp(-d + b, 0.0, a);
        sd = a;
    }
    const double sc = std::abs(sn) < 1e-300 ? 0.0 : sn / sd;
    const double tc = std::abs(tn) < 1e-300 ? 0.0 : tn / td;
    return (w + sc * u - tc * v).norm();
}

void append_element(WireMesh& mesh, const PlacedElement& e, int segments, int index) {
    const WireAntenna& a = e.antenna;
    a.validate();
    const Vec3 half_driven(0.0, 0.0, 0.5 * a.driven_length);
    const int driven = mesh.add_wire("element " + std::to_string(index) + " driven", e.center - half_driven,
                                     e.center + half_driven, a.radius, segments);
    mesh.add_feed(driven);
    if (a.reflector_length) {
        const Vec3 c = e.center - Vec3(0.0, a.separation, 0.0);
        const Vec3 half(0.0, 0.0, 0.5 * *a.reflector_length);
        mesh.add_wire("element " + std::to_string(index) + " reflector", c - half, c + half, a.radius, segments);
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Geometry

WireAntenna WireAntenna::reflector_element(Frequency f, double radius) {
    const double lambda = f.wavelength();
    return reflector_element(0.51 * lambda, 0.53 * lambda, 0.29 * lambda, radius);
}

WireAntenna WireAntenna::reflector_element(double driven, double reflector, double separation, double radius) {
    WireAntenna a;
    a.driven_length = driven;
    a.reflector_length = reflector;
    a.separation = separation;
    a.radius = radius;
    a.validate();
    return a;
}

WireAntenna WireAntenna::dipole(double length, double radius) {
    WireAntenna a;
    a.driven_length = length;
    a.radius = radius;
    a.validate();
    return a;
}

void WireAntenna::validate() const {
    if (!(driven_length > 0.0)) throw GeometryError("driven length must be positive");
    if (!(radius > 0.0)) throw GeometryError("wire radius must be positive");
    if (!(radius < driven_length / 100.0)) throw GeometryError("wire radius must be below 1/100 of the driven length");
    if (reflector_length) {
        if (!(*reflector_length > driven_length)) throw GeometryError("reflector must be longer than the driven rod");
        if (!(separation > 0.0)) throw GeometryError("reflector separation must be positive");
    }
}

int WireMesh::add_wire(std::string name, const Vec3& start, const Vec3& end, double radius, int segments) {
    if (segments < 1) throw std::invalid_argument("wire needs at least one segment");
    const double seg_len = (end - start).norm() / segments;
    if (!(seg_len > 4.0 * radius)) {
        throw MeshError("mesh too fine on " + name + ": segment length " + std::to_string(seg_len) +
                            " m is not above 4 x radius",
                        name);
    }
    Wire w{std::move(name), start, end, radius, static_cast<int>(order_.size()), segments};
    const int wire_index = static_cast<int>(wires_.size());
    for (int i = 0; i < segments; ++i) {
        const Vec3 a = start + (end - start) * (static_cast<double>(i) / segments);
        const Vec3 b = start + (end - start) * (static_cast<double>(i + 1) / segments);
        order_.push_back(static_cast<int>(segments_.size()));
        segments_.push_back({a, b, radius, wire_index});
    }
    wires_.push_back(std::move(w));
    return wire_index;
}

int WireMesh::add_feed(int wire) {
    const Wire& w = wires_.at(wire);
    feeds_.push_back(order_[w.first_segment + w.segment_count / 2]);
    return static_cast<int>(feeds_.size()) - 1;
}

double WireMesh::max_segment_length() const {
    double m = 0.0;
    for (const auto& s : segments_) m = std::max(m, s.length());
    return m;
}

WireMesh WireMesh::with_swapped_segments(int i, int j) const {
    WireMesh out = *this;
    std::swap(out.segments_.at(i), out.segments_.at(j));
    for (int& o : out.order_) {
        if (o == i) o = j;
        else if (o == j) o = i;
    }
    for (int& f : out.feeds_) {
        if (f == i) f = j;
        else if (f == j) f = i;
    }
    return out;
}

std::vector<WireMesh::Piece> WireMesh::pieces() const {
    std::vector<Piece> out;
    for (const auto& w : wires_) {
        const Vec3 step = (w.end - w.start) / w.segment_count;
        Vec3 prev = w.start;
        int prev_basis = -1;
        for (int i = 0; i < w.segment_count; ++i) {
            const Vec3 mid = w.start + (i + 0.5) * step;
            const int basis = order_[w.first_segment + i];
            out.push_back({prev, mid, w.radius, prev_basis, basis});
            prev = mid;
            prev_basis = basis;
        }
        out.push_back({prev, w.end, w.radius, prev_basis, -1});
    }
    return out;
}

WireMesh mesh_antenna(const WireAntenna& antenna, int segments_per_wire) {
    if (segments_per_wire < 11 || segments_per_wire % 2 == 0) {
        throw std::invalid_argument("segments per wire must be odd and at least 11");
    }
    const PlacedElement e{antenna, Vec3::Zero()};
    WireMesh mesh;
    append_element(mesh, e, segments_per_wire, 0);
    return mesh;
}

WireMesh mesh_array(std::span<const PlacedElement> elements, int segments_per_wire) {
    if (segments_per_wire < 11 || segments_per_wire % 2 == 0) {
        throw std::invalid_argument("segments per wire must be odd and at least 11");
    }
    if (elements.empty()) throw GeometryError("array needs at least one element");
    WireMesh mesh;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        append_element(mesh, elements[i], segments_per_wire, static_cast<int>(i));
    }
    const auto wires = mesh.wires();
    for (std::size_t i = 0; i < wires.size(); ++i) {
        for (std::size_t j = i + 1; j < wires.size(); ++j) {
            const double dist = segment_distance(wires[i].start, wires[i].end, wires[j].start, wires[j].end);
            if (dist <= wires[i].radius + wires[j].radius) {
                throw GeometryError("overlapping geometry: " + wires[i].name + " and " + wires[j].name);
            }
        }
    }
    return mesh;
}

// ---------------------------------------------------------------------------
// Matrix fill

ComplexMatrix fill_impedance_matrix(const WireMesh& mesh, Frequency f, FillOptions options) {
    const double lambda = f.wavelength();
    for (const auto& w : mesh.wires()) {
        const double seg = (w.end - w.start).norm() / w.segment_count;
        if (seg >= lambda / 10.0) {
            throw MeshError("refine mesh: segments on " + w.name + " are not shorter than lambda/10", w.name);
        }
    }

    const auto pieces = mesh.pieces();
    std::vector<PieceGeom> geom;
    geom.reserve(pieces.size());
    for (const auto& p : pieces) geom.push_back(geom_of(p));

    const double k = f.wavenumber();
    const std::size_t np = pieces.size();

    // Upper-triangular piece-pair table; each row is computed independently so
    // the result does not depend on the number of workers.
    std::vector<std::vector<PairIntegrals>> table(np);
    unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(np));
    auto fill_rows = [&](unsigned worker) {
        for (std::size_t p = worker; p < np; p += workers) {
            auto& row = table[p];
            row.resize(np - p);
            for (std::size_t q = p; q < np; ++q) row[q - p] = pair_integrals(geom[p], geom[q], k);
        }
    };
    if (workers <= 1) {
        fill_rows(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(fill_rows, w);
    }

    const std::size_t n = mesh.size();
    ComplexMatrix z = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const double omega = f.angular();
    const complex vector_coef(0.0, omega * mu0);
    const complex scalar_coef = 1.0 / complex(0.0, omega * eps0);

    auto accumulate = [&](std::size_t p, std::size_t q, const PairIntegrals& in, bool transpose) {
        const int pb[2] = {pieces[p].start_basis, pieces[p].end_basis};
        const int qb[2] = {pieces[q].start_basis, pieces[q].end_basis};
        const double pd[2] = {-1.0 / geom[p].length, 1.0 / geom[p].length};
        const double qd[2] = {-1.0 / geom[q].length, 1.0 / geom[q].length};
        const double tt = geom[p].dir.dot(geom[q].dir);
        for (int a = 0; a < 2; ++a) {
            if (pb[a] < 0) continue;
            for (int b = 0; b < 2; ++b) {
                if (qb[b] < 0) continue;
                const complex s = transpose ? in.s[b][a] : in.s[a][b];
                z(pb[a], qb[b]) += vector_coef * tt * s + scalar_coef * (pd[a] * qd[b]) * in.t;
            }
        }
    };
    for (std::size_t p = 0; p < np; ++p) {
        for (std::size_t q = p; q < np; ++q) {
            const PairIntegrals& in = table[p][q - p];
            accumulate(p, q, in, false);
            if (q != p) accumulate(q, p, in, true);
        }
    }
    return z;
}

complex impedance_entry_reference(const WireMesh& mesh, Frequency f, int row, int col, int subdivisions) {
    const auto pieces = mesh.pieces();
    const double k = f.wavenumber();
    const double omega = f.angular();
    const GaussRule& rule = gauss(4);

    // Pieces supporting a basis, with the shape value at start and end of the piece.
    struct Support {
        PieceGeom g;
        double v0, v1;
    };
    auto supports = [&](int basis) {
        std::vector<Support> out;
        for (const auto& p : pieces) {
            if (p.start_basis == basis) out.push_back({geom_of(p), 1.0, 0.0});
            if (p.end_basis == basis) out.push_back({geom_of(p), 0.0, 1.0});
        }
        return out;
    };
    const auto sm = supports(row);
    const auto sn = supports(col);

    complex total{};
    for (const auto& pm : sm) {
        for (const auto& pn : sn) {
            const double tt = pm.g.dir.dot(pn.g.dir);
            const double dm = (pm.v1 - pm.v0) / pm.g.length;
            const double dn = (pn.v1 - pn.v0) / pn.g.length;
            complex vec{}, sca{};
            for (int i = 0; i < subdivisions; ++i) {
                for (std::size_t gi = 0; gi < rule.x.size(); ++gi) {
                    const double u = (i + rule.x[gi]) / subdivisions;
                    const double wu = rule.w[gi] * pm.g.length / subdivisions;
                    const Vec3 r = pm.g.start + u * pm.g.length * pm.g.dir;
                    const double fm = pm.v0 + (pm.v1 - pm.v0) * u;
                    for (int j = 0; j < subdivisions; ++j) {
                        for (std::size_t gj = 0; gj < rule.x.size(); ++gj) {
                            const double v = (j + rule.x[gj]) / subdivisions;
                            const double wv = rule.w[gj] * pn.g.length / subdivisions;
                            const Vec3 rp = pn.g.start + v * pn.g.length * pn.g.dir;
                            const double fn = pn.v0 + (pn.v1 - pn.v0) * v;
                            const double rr = std::sqrt((r - rp).squaredNorm() + pn.g.radius * pn.g.radius);
                            const complex g = std::exp(complex(0.0, -k * rr)) / (4.0 * pi * rr);
                            vec += wu * wv * fm * fn * g;
                            sca += wu * wv * g;
                        }
                    }
                }
            }
            total += complex(0.0, omega * mu0) * tt * vec + (dm * dn) * sca / complex(0.0, omega * eps0);
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Solve

double CurrentSolution::input_power() const {
    double p = 0.0;
    for (int f : feeds) p += 0.5 * std::real(excitation(f) * std::conj(currents(f)));
    return p;
}

ComplexVector delta_gap_excitation(const WireMesh& mesh, std::span<const complex> port_voltages) {
    if (port_voltages.size() != mesh.feeds().size()) {
        throw std::invalid_argument("one voltage per feed port required");
    }
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(mesh.size()));
    for (std::size_t i = 0; i < port_voltages.size(); ++i) v(mesh.feeds()[i]) = port_voltages[i];
    return v;
}

CurrentSolution solve_currents(const ComplexMatrix& z, const ComplexVector& excitation, std::vector<int> feeds,
                               double frequency_hz) {
    if (z.rows() != z.cols()) throw std::invalid_argument("impedance matrix must be square");
    if (excitation.size() != z.rows()) throw std::invalid_argument("excitation length must match matrix order");
    Eigen::PartialPivLU<ComplexMatrix> lu(z);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-13)) {
        throw ConditioningError("impedance matrix is numerically singular (condition ~ " +
                                    std::to_string(rcond > 0.0 ? 1.0 / rcond : INFINITY) + ")",
                                rcond > 0.0 ? 1.0 / rcond : INFINITY);
    }
    CurrentSolution sol;
    sol.currents = lu.solve(excitation);
    sol.excitation = excitation;
    sol.feeds = std::move(feeds);
    sol.frequency_hz = frequency_hz;
    const double vnorm = excitation.norm();
    sol.relative_residual = vnorm > 0.0 ? (z * sol.currents - excitation).norm() / vnorm : 0.0;
    return sol;
}

complex input_impedance(const CurrentSolution& solution, std::size_t port) {
    const complex i = solution.feed_current(port);
    if (std::abs(i) < 1e-12) throw std::domain_error("feed current below 1e-12 A: no excitation");
    return solution.feed_voltage(port) / i;
}

// ---------------------------------------------------------------------------
// Far field

namespace {

Eigen::Vector3cd radiation_vector(const CurrentSolution& sol, const std::vector<WireMesh::Piece>& pieces,
                                  const Vec3& rhat, double k) {
    const GaussRule& rule = gauss(4);
    Eigen::Vector3cd n = Eigen::Vector3cd::Zero();
    for (const auto& p : pieces) {
        const complex i0 = p.start_basis >= 0 ? sol.currents(p.start_basis) : complex{};
        const complex i1 = p.end_basis >= 0 ? sol.currents(p.end_basis) : complex{};
        const Vec3 d = p.end - p.start;
        const double l = d.norm();
        complex acc{};
        for (std::size_t g = 0; g < rule.x.size(); ++g) {
            const double u = rule.x[g];
            const Vec3 r = p.start + u * d;
            acc += rule.w[g] * l * ((1.0 - u) * i0 + u * i1) * std::exp(complex(0.0, k * rhat.dot(r)));
        }
        n += acc * (d / l).cast<complex>();
    }
    return n;
}

}  // namespace

FarFieldSample far_field_at(const CurrentSolution& solution, const WireMesh& mesh, double theta, double phi) {
    const double k = Frequency(solution.frequency_hz).wavenumber();
    const double omega = Frequency(solution.frequency_hz).angular();
    const Vec3 rhat(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
    const Vec3 th(std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta));
    const Vec3 ph(-std::sin(phi), std::cos(phi), 0.0);
    const auto n = radiation_vector(solution, mesh.pieces(), rhat, k);
    const complex coef(0.0, -omega * mu0 / (4.0 * pi));
    return {coef * n.dot(th.cast<complex>()), coef * n.dot(ph.cast<complex>())};
}

RadiationPattern far_field(const CurrentSolution& solution, const WireMesh& mesh, std::span<const double> angles_deg) {
    if (angles_deg.empty()) throw std::invalid_argument("far field needs a non-empty angle grid");
    const double k = Frequency(solution.frequency_hz).wavenumber();
    const double omega = Frequency(solution.frequency_hz).angular();
    const complex coef(0.0, -omega * mu0 / (4.0 * pi));
    const auto pieces = mesh.pieces();
    std::vector<complex> field(angles_deg.size());
    for (std::size_t i = 0; i < angles_deg.size(); ++i) {
        const double a = deg_to_rad(angles_deg[i]);
        const Vec3 rhat(std::sin(a), std::cos(a), 0.0);
        const auto n = radiation_vector(solution, pieces, rhat, k);
        // theta-hat is -z in the xy plane.
        field[i] = coef * (-n.z());
    }
    return {std::vector<double>(angles_deg.begin(), angles_deg.end()), std::move(field), solution.input_power()};
}

double radiated_power(const CurrentSolution& solution, const WireMesh& mesh, int polar_points, int azimuth_points) {
    const double k = Frequency(solution.frequency_hz).wavenumber();
    const double omega = Frequency(solution.frequency_hz).angular();
    const double coef = omega * mu0 / (4.0 * pi);
    const auto pieces = mesh.pieces();
    const GaussRule& rule = gauss(polar_points);
    double total = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double c = 2.0 * rule.x[i] - 1.0;  // cos(theta)
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        double ring = 0.0;
        for (int j = 0; j < azimuth_points; ++j) {
            const double phi = 2.0 * pi * j / azimuth_points;
            const Vec3 rhat(s * std::cos(phi), s * std::sin(phi), c);
            const auto n = radiation_vector(solution, pieces, rhat, k);
            const Eigen::Vector3cd perp = n - rhat.cast<complex>() * rhat.cast<complex>().dot(n);
            ring += perp.squaredNorm();
        }
        total += 2.0 * rule.w[i] * ring * (2.0 * pi / azimuth_points);
    }
    return total * coef * coef / (2.0 * eta0);
}

// ---------------------------------------------------------------------------
// Convenience solves

ElementSolution solve_element(const WireAntenna& antenna, Frequency f, std::span<const double> angles_deg,
                              int segments_per_wire, double feed_voltage) {
    WireMesh mesh = mesh_antenna(antenna, segments_per_wire);
    const ComplexMatrix z = fill_impedance_matrix(mesh, f);
    const complex v[1] = {complex(feed_voltage, 0.0)};
    CurrentSolution sol = solve_currents(z, delta_gap_excitation(mesh, v),
                                         std::vector<int>(mesh.feeds().begin(), mesh.feeds().end()), f.hertz());
    const complex zin = input_impedance(sol);
    RadiationPattern pattern = far_field(sol, mesh, angles_deg);
    return {std::move(mesh), std::move(sol), zin, std::move(pattern)};
}

CurrentSolution solve_with_feed_currents(const ComplexMatrix& z, const WireMesh& mesh,
                                         std::span<const complex> feed_currents, double frequency_hz) {
    const auto feeds = mesh.feeds();
    if (feed_currents.size() != feeds.size()) throw std::invalid_argument("one feed current per port required");
    const auto n = static_cast<Eigen::Index>(mesh.size());
    const auto ports = static_cast<Eigen::Index>(feeds.size());
    Eigen::PartialPivLU<ComplexMatrix> lu(z);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-13)) {
        throw ConditioningError("impedance matrix is numerically singular", rcond > 0.0 ? 1.0 / rcond : INFINITY);
    }
    // Port admittance block: currents at the feeds per unit voltage at each feed.
    ComplexMatrix columns(n, ports);
    ComplexMatrix y(ports, ports);
    for (Eigen::Index j = 0; j < ports; ++j) {
        ComplexVector e = ComplexVector::Zero(n);
        e(feeds[j]) = 1.0;
        columns.col(j) = lu.solve(e);
        for (Eigen::Index i = 0; i < ports; ++i) y(i, j) = columns(feeds[i], j);
    }
    ComplexVector target(ports);
    for (Eigen::Index i = 0; i < ports; ++i) target(i) = feed_currents[i];
    const ComplexVector v = y.partialPivLu().solve(target);

    CurrentSolution sol;
    sol.excitation = ComplexVector::Zero(n);
    for (Eigen::Index i = 0; i < ports; ++i) sol.excitation(feeds[i]) = v(i);
    sol.currents = columns * v;
    sol.feeds.assign(feeds.begin(), feeds.end());
    sol.frequency_hz = frequency_hz;
    const double vnorm = sol.excitation.norm();
    sol.relative_residual = vnorm > 0.0 ? (z * sol.currents - sol.excitation).norm() / vnorm : 0.0;
    return sol;
}

ArraySolution solve_array(std::span<const PlacedElement> elements, std::span<const double> phases_deg, Frequency f,
                          std::span<const double> angles_deg, FeedModel feed, int segments_per_wire) {
    if (phases_deg.size() != elements.size()) throw std::invalid_argument("one phase per element required");
    if (angles_deg.empty()) throw std::invalid_argument("far field needs a non-empty angle grid");
    WireMesh mesh = mesh_array(elements, segments_per_wire);
    const ComplexMatrix z = fill_impedance_matrix(mesh, f);
    std::vector<complex> drive(elements.size());
    for (std::size_t i = 0; i < drive.size(); ++i) drive[i] = std::polar(1.0, -deg_to_rad(phases_deg[i]));
    CurrentSolution sol =
        feed == FeedModel::current
            ? solve_with_feed_currents(z, mesh, drive, f.hertz())
            : solve_currents(z, delta_gap_excitation(mesh, drive),
                             std::vector<int>(mesh.feeds().begin(), mesh.feeds().end()), f.hertz());
    RadiationPattern pattern = far_field(sol, mesh, angles_deg);
    std::vector<complex> active(elements.size());
    for (std::size_t i = 0; i < active.size(); ++i) active[i] = input_impedance(sol, i);
    return {std::move(mesh), std::move(sol), std::move(pattern), std::move(active)};
}

RadiationPattern solve_full_array(std::span<const PlacedElement> elements, std::span<const double> phases_deg,
                                  Frequency f, std::span<const double> angles_deg, FeedModel feed,
                                  int segments_per_wire) {
    return solve_array(elements, phases_deg, f, angles_deg, feed, segments_per_wire).pattern;
}

std::vector<double> s11_sweep_db(const WireAntenna& antenna, std::span<const double> freqs_hz, double z_ref,
                                 int segments_per_wire) {
    const WireMesh mesh = mesh_antenna(antenna, segments_per_wire);
    std::vector<double> out;
    out.reserve(freqs_hz.size());
    const complex v[1] = {complex(1.0, 0.0)};
    for (double fh : freqs_hz) {
        const Frequency f(fh);
        const auto sol = solve_currents(fill_impedance_matrix(mesh, f), delta_gap_excitation(mesh, v),
                                        std::vector<int>(mesh.feeds().begin(), mesh.feeds().end()), fh);
        out.push_back(magnitude_to_db(std::abs(reflection_coefficient(input_impedance(sol), z_ref))));
    }
    return out;
}

WireAntenna tune_driven_length(const WireAntenna& antenna, Frequency f, int segments_per_wire) {
    const complex v[1] = {complex(1.0, 0.0)};
    auto reactance = [&](double length) {
        WireAntenna a = antenna;
        a.driven_length = length;
        const WireMesh mesh = mesh_antenna(a, segments_per_wire);
        const auto sol = solve_currents(fill_impedance_matrix(mesh, f), delta_gap_excitation(mesh, v),
                                        std::vector<int>(mesh.feeds().begin(), mesh.feeds().end()), f.hertz());
        return input_impedance(sol).imag();
    };
    double x0 = antenna.driven_length, x1 = 0.97 * antenna.driven_length;
    double f0 = reactance(x0), f1 = reactance(x1);
    for (int iter = 0; iter < 30 && std::abs(f1) > 1e-3; ++iter) {
        const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = reactance(x1);
    }
    WireAntenna out = antenna;
    out.driven_length = x1;
    if (out.reflector_length && *out.reflector_length <= x1) {
        throw GeometryError("tuned driven rod would not be shorter than the reflector");
    }
    return out;
}

}  // namespace swarmarray
