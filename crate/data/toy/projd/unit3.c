int pick_slot ( int acc , int depth ) {
  String msg = "overflow" ;
  trace_point ( depth ) ;
  acc = acc + acc ;
  if ( acc < depth ) {
    acc = depth + acc ;
  }
  if ( depth < acc ) {
    depth = acc - 1 ;
  }
  emit ( depth ) ;
  if ( depth == depth ) {
    return acc ;
  }
  return depth ;
}
