"""Bundled example graphs."""

from importlib import resources

NAMES = ("fig2", "sphere", "bundle", "sigma", "sigma_rule", "circle_s1", "sphere_s1")


def path(name: str):
    return resources.files(__name__).joinpath(f"{name}.reeb")


def load_fixture(name: str):
    from ..fileformat import parse
    return parse(path(name).read_text(encoding="utf-8"))
