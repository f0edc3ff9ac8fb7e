import json

from cryptosystem.keyfiles import ROLE_PRIVATE, load_key
from mdpc_workbench.cli import WorkbenchCommand
from protograph.ensembles import key_space_bits, weight_bound
from tanner.graph import degree_profile, protograph_profile

COLUMNS = ['property', 'value']


class Command(WorkbenchCommand):
    help = 'Muestra el perfil de grados, los pesos y el espacio de claves de un ensamble o de una clave privada'

    def add_command_arguments(self, parser):
        self.add_ensemble_arguments(parser)
        parser.add_argument('--private-key', dest='private_key', help='Inspeccionar una clave privada guardada')

    def run(self, config, options):
        if config.get('private_key'):
            key = load_key(config['private_key'], role=ROLE_PRIVATE)
            spec = key.spec
            profile = degree_profile(key.decoding_graph)
        else:
            key = None
            spec = self.ensemble_spec(config)
            profile = protograph_profile(spec)

        rows = [
            ('ensemble', spec.name),
            ('Q', spec.Q),
            ('base', json.dumps(spec.base.to_record()['rows'])),
            ('state_columns', json.dumps(sorted(spec.base.state_columns))),
            ('n', spec.block_length),
            ('k', spec.dimension),
            ('row_weight_bound', weight_bound(spec.base)),
            ('key_space_bits', round(key_space_bits(spec), 1)),
        ]
        for name in ('vn', 'cn', 'vn_by_type', 'cn_by_type', 'punctured', 'edges'):
            value = profile[name]
            rows.append((f'degrees.{name}' if isinstance(value, dict) else name, _compact(value)))
        if key is not None:
            rows.append(('h_weights', json.dumps(key.h.weights()[0])))
            rows.append(('row_weight', key.row_weight))
            if key.gamma is not None:
                rows.append(('gamma_weights', json.dumps(key.gamma.weights())))
        self.emit_table([dict(zip(COLUMNS, row)) for row in rows], COLUMNS, config)


def _compact(value):
    if isinstance(value, dict):
        return json.dumps(value, separators=(',', ':'))
    return value
