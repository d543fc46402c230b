#include <algorithm>
#include <cmath>

#include "gapkit/error.hpp"
#include "gapkit/solver.hpp"

namespace gapkit {

double PotentialField::Piece::at(double x) const {
    switch (kind) {
    case Kind::Constant: return v0;
    case Kind::Affine: return v0 + (v1 - v0) * (x - x0) / (x1 - x0);
    case Kind::Smooth: return f(x);
    }
    return v0;
}

PotentialField::PotentialField(const Potential& V) {
    const Potential flat = V.flattened();
    const auto b = flat.breakpoints();
    const auto segs = flat.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        Piece piece;
        piece.x0 = b[i];
        piece.x1 = b[i + 1];
        piece.kind = segs[i].is_constant() ? Kind::Constant : Kind::Affine;
        piece.v0 = segs[i].left;
        piece.v1 = segs[i].right;
        pieces_.push_back(std::move(piece));
    }
}

PotentialField::PotentialField(std::vector<Piece> pieces, std::optional<Singularity> singular)
    : pieces_(std::move(pieces)), singular_(singular) {
    if (pieces_.empty()) fail(ErrorKind::InvalidArgument, "potential field needs pieces");
    if (std::abs(pieces_.front().x0) > 1e-12 || std::abs(pieces_.back().x1 - kPi) > 1e-12) {
        fail(ErrorKind::InvalidArgument, "potential field must cover [0, pi]");
    }
    pieces_.front().x0 = 0.0;
    pieces_.back().x1 = kPi;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const Piece& p = pieces_[i];
        if (!(p.x1 > p.x0)) fail(ErrorKind::InvalidArgument, "empty potential piece");
        if (i > 0 && std::abs(p.x0 - pieces_[i - 1].x1) > 1e-12) {
            fail(ErrorKind::InvalidArgument, "potential pieces must be contiguous");
        }
        if (p.kind == Kind::Smooth && !p.f) fail(ErrorKind::InvalidArgument, "smooth piece needs f");
    }
    if (singular_) {
        if (!(singular_->c >= 0.0) || !(singular_->q > 0.0)) {
            fail(ErrorKind::InvalidArgument, "singularity needs c >= 0 and q > 0");
        }
        if (singular_->q >= 2.0) {
            fail(ErrorKind::Domain, "c x^-q with q >= 2 is not integrable enough for shooting");
        }
        if (pieces_.front().kind != Kind::Smooth) {
            fail(ErrorKind::InvalidArgument, "singular field must start with a smooth piece");
        }
    }
}

PotentialField PotentialField::power_law(double c, double q) {
    if (!(q > 0.0 && q < 2.0)) {
        fail(ErrorKind::Domain, "c x^-q needs 0 < q < 2 for the endpoint to stay regular");
    }
    if (!(c >= 0.0)) fail(ErrorKind::InvalidArgument, "c x^-q needs c >= 0");
    Piece piece;
    piece.x0 = 0.0;
    piece.x1 = kPi;
    piece.kind = Kind::Smooth;
    piece.f = [c, q](double x) { return c * std::pow(x, -q); };
    return PotentialField({piece}, Singularity{c, q});
}

double PotentialField::operator()(double x) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](double v, const Piece& p) { return v < p.x1; });
    if (it == pieces_.end()) --it;
    return it->at(x);
}

std::vector<double> PotentialField::breakpoints() const {
    std::vector<double> out;
    out.reserve(pieces_.size() + 1);
    for (const Piece& p : pieces_) out.push_back(p.x0);
    out.push_back(kPi);
    return out;
}

PotentialField PotentialField::reflected() const {
    std::vector<Piece> out;
    out.reserve(pieces_.size());
    for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
        Piece p;
        p.x0 = kPi - it->x1;
        p.x1 = kPi - it->x0;
        p.kind = it->kind;
        p.v0 = it->kind == Kind::Affine ? it->v1 : it->v0;
        p.v1 = it->kind == Kind::Affine ? it->v0 : it->v1;
        if (it->f) {
            auto f = it->f;
            p.f = [f](double x) { return f(kPi - x); };
        }
        out.push_back(std::move(p));
    }
    out.front().x0 = 0.0;
    out.back().x1 = kPi;
    return PotentialField(std::move(out));
}

}  // namespace gapkit
