// Wire types for the allocation service's public HTTP API.

export interface Coordinate {
  lat: number;
  lon: number;
}

export interface RescuePointForm {
  address: string;
  nb_people: number;
  nb_disabled: number;
  priority: number;
}

export interface SolverOptions {
  solver?: 'auto' | 'exact' | 'greedy';
  fallback?: 'straight-line' | 'exclude';
}

export interface ResourceRow {
  resource_id: string;
  driver_id: string | null;
  vehicle_id: string | null;
  vehicle_class: string | null;
  seats: number;
  time_s: number;
}

export interface ShelterLeg {
  shelter_id: string;
  persons: number;
  time_s: number;
}

export interface PerPointBlock {
  point_id: string;
  priority: number;
  address: string | null;
  location: Coordinate | null;
  nb_people: number;
  nb_disabled: number;
  demand_seats: number;
  served: boolean;
  seats_delivered: number;
  deficit_seats: number;
  resources: ResourceRow[];
  shelters: ShelterLeg[];
}

export interface PlanDocument {
  status: 'optimal' | 'heuristic' | 'infeasible';
  objective_s: number;
  vehicles_used: number;
  assignments: { point_id: string; resource_id: string; time_s: number }[];
  per_point: PerPointBlock[];
  shelter_occupancy: { shelter_id: string; capacity: number | null; occupied: number }[];
  notices: string[];
  diagnostics: string[];
}

export interface RecommendationResponse {
  request_id: string;
  decided: string | null;
  plan: PlanDocument;
}

export interface Problem {
  code: string;
  message: string;
  details: Record<string, unknown>;
}
