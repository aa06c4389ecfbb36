"""
Setup script for the Frobenius Toolkit package.
"""

from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

with open("requirements.txt", "r", encoding="utf-8") as fh:
    requirements = [line for line in fh.read().splitlines() if line and not line.startswith("#")]

setup(
    name="frobenius-toolkit",
    version="0.1.0",
    author="Your Name",
    author_email="your.email@example.com",
    description="Exact computations with Frobenius functionals, r-matrices and graphs on parabolic subalgebras of sl(n)",
    long_description=long_description,
    long_description_content_type="text/markdown",
    url="https://github.com/yourusername/frobenius-toolkit",
    packages=find_packages(exclude=["examples", "examples.*"]),
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.9",
    install_requires=requirements,
    extras_require={
        "test": ["pytest>=7.0"],
    },
    entry_points={
        "console_scripts": [
            "frobenius-toolkit=frobenius_toolkit.__main__:main",
        ],
    },
    include_package_data=True,
)
