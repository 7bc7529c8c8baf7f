from hkb.core import sorted_atoms


def names(atoms) -> list:
    return [str(a) for a in sorted_atoms(atoms)]


def family(sets) -> list:
    return sorted(names(s) for s in sets)
