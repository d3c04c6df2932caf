import setuptools


with open("tempered_actrw/_version.py") as f:
    version = f.readlines()[-1].split()[-1].strip("\"'")

with open('README.rst', 'r') as f:
    long_description = f.read()

description = "Monte Carlo simulation, renewal theory and Fokker-Planck solver for aging continuous-time " \
              "random walks with tempered power-law waiting times."

setuptools.setup(
    name="tempered-actrw",
    author="The tempered-actrw developers",
    version=version,
    description=description,
    long_description=long_description,
    long_description_content_type="text/x-rst",
    packages=setuptools.find_packages(exclude=["examples", "examples.*"]),
    test_suite="tempered_actrw",
    python_requires=">=3.8",
    setup_requires=['h5py'],
    install_requires=['numpy', 'scipy>=1.12', 'pandas', 'h5py', 'mpmath', 'dask'],
    extras_require={'plot': ['matplotlib'], 'dev': ['pycodestyle']},
    entry_points={'console_scripts': ['tempered-actrw = tempered_actrw.experiments.runner:main']}
)
