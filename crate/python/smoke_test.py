"""Smoke test for the pysteinberg extension module."""

from pathlib import Path

import pysteinberg

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def read(name):
    return (FIXTURES / name).read_text()


def main():
    pair = pysteinberg.Groupoid(read("pair2.json"))
    assert len(pair) == 4
    assert pair.validate()["valid"]
    report = pair.verify_theorem()
    assert report["holds"] and report["lhs_dim"] == report["rhs_dim"] == 2, report
    dim, _ = pair.centraliser(["u1", "u2"])
    assert dim == 2
    inj = pair.core_injectivity(["g12 - g21"])
    assert inj["agree"] and not inj["injective"], inj

    toeplitz = pysteinberg.LeavittPathAlgebra(read("toeplitz.json"), "rat")
    check = toeplitz.centraliser_check("[c;v]")
    assert check["agree"] and not check["commutes"] and check["witness"] == "f", check
    assert toeplitz.normalize("[c;c] + [f;f]") == "[v;v]"
    assert not toeplitz.commutative()["commutative"]

    loop = pysteinberg.LeavittPathAlgebra(read("loop.json"), "mod:5")
    assert loop.mul("[c;v]", "[v;c]") == "[v;v]"
    assert loop.commutative()["commutative"]
    assert loop.is_central("[c;v]")["central"]

    iso = pysteinberg.verify_iso(read("edge.json"), samples=50, seed=1)
    assert iso["passes"] and iso["groupoid_size"] == 4, iso

    try:
        toeplitz.normalize("[c;q]")
    except ValueError:
        pass
    else:
        raise AssertionError("bad expression accepted")

    print("ok")


if __name__ == "__main__":
    main()
