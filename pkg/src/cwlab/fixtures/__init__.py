"""Solutions shipped as text in the pseudo-code format."""

from __future__ import annotations

from importlib import resources

# name -> (coins, weighings, mode it verifies under)
CATALOG: dict[str, tuple[int, int, str]] = {
    "inline_2_3": (3, 2, "fc"),
    "inline_2_4": (4, 2, "fc"),
    "inline_3_6": (6, 3, "fc"),
    "scalable_3_6": (6, 3, "fc"),
    "balanced_3_4": (4, 3, "fc"),
    "a_4_10": (10, 4, "fc"),
    "b_4_11": (11, 4, "fc"),
    "c_5_20": (20, 5, "fc"),
    "d_6_36": (36, 6, "fc"),
    "pseudo_4_11": (11, 4, "pseudo"),
}


def text(name: str) -> str:
    if name not in CATALOG:
        raise KeyError(f"unknown fixture {name!r}")
    return resources.files(__name__).joinpath(f"{name}.txt").read_text(encoding="utf-8")


def path(name: str):
    return resources.files(__name__).joinpath(f"{name}.txt")


def load(name: str):
    from ..codec import parse

    return parse(text(name), CATALOG[name][0])
