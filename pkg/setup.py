from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="smbs",
    version="0.1.0",
    description="Semi-Markov beta-Stacy process: conjugate inference, predictive kernels and reinforced urns",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*"]),
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.9",
    install_requires=[
        "rich>=13.0.0",
        "click>=8.0.0",
        "pyyaml>=6.0",
        "numpy>=1.25",
        "scipy>=1.10",
        "pandas>=2.0",
    ],
    extras_require={
        "test": [
            "pytest>=7.0",
            "hypothesis>=6.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "smbs=smbs.cli.main:cli",
        ],
    },
    include_package_data=True,
)
