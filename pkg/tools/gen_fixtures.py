"""Regenerate the JSON fixtures in ``fixtures/`` from :mod:`distvar.fixtures`."""

import pathlib

from distvar import fixtures as fx
from distvar import io as dio

OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def main():
    OUT.mkdir(exist_ok=True)
    for group, suffix in ((fx.TRIPLES, ""), (fx.COLLIGATIONS, "-colligation"),
                          (fx.TUPLES, "-tuple")):
        for name, make in group.items():
            dio.save(make(), OUT / f"{name}{suffix}.json")


if __name__ == "__main__":
    main()
