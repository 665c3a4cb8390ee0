#include "arcrom/rom.hpp"

#include "arcrom/assembly.hpp"

namespace arcrom::rom {

RomModel linear_rom(const fe::FeModel& model, const modal::ModeSet& modes, int k, const Vec& p,
                    double rayleigh_alpha, double rayleigh_beta) {
    if (k < 1 || k > modes.count()) throw std::invalid_argument("linear_rom: k out of range");
    const Mat v = modes.shapes.leftCols(k);
    RomModel rom;
    rom.mass = v.transpose() * (fe::assemble_mass(model) * v);
    rom.tensors = ident::TensorSet(k, ident::BasisTag::W);
    rom.tensors.k1() = v.transpose() * (fe::assemble_linear_stiffness(model) * v);
    rom.damping = rayleigh_alpha * rom.mass + rayleigh_beta * rom.tensors.k1();
    rom.load_shape = v.transpose() * p;
    return rom;
}

}  // namespace arcrom::rom
