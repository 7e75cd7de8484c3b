from setuptools import setup


from os import path
this_directory = path.abspath(path.dirname(__file__))
readme = path.join(this_directory, 'README.md')
long_description = ""
if path.exists(readme):
    with open(readme, encoding='utf-8') as f:
        long_description = f.read()


setup(
    name='hadamard-lab',
    packages=['hlab', 'hlab.regions', 'hlab.distributions', 'hlab.mellin'],
    version='0.1.0',
    include_package_data=True,
    license='Apache 2.0',
    description='Numerical lab for Hadamard operators on open subsets of R^d',
    long_description=long_description,
    long_description_content_type='text/markdown',
    keywords=['Hadamard operator', 'Mellin convolution', 'Euler operator', 'distributions'],
    install_requires=[
        'numpy >= 1.20',
        'scipy >= 1.6',
        'tqdm',
        'setuptools',
    ],
    extras_require={
        'test': ['pytest', 'hypothesis'],
    },
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Programming Language :: Python :: 3',
    ],
)
