from pathlib import Path

from setuptools import find_packages, setup

requirements = [
    line.split("#")[0].strip()
    for line in Path(__file__).with_name("requirements.txt").read_text().splitlines()
    if line.split("#")[0].strip()
]

setup(
    name="contraction-calculus",
    version="0.1.0",
    packages=find_packages(include=["src", "src.*"]),
    install_requires=[r for r in requirements if not r.startswith(("pytest", "hypothesis"))],
    extras_require={"test": [r for r in requirements if r.startswith(("pytest", "hypothesis"))]},
    entry_points={"console_scripts": ["concalc = src.concalc:main"]},
)
